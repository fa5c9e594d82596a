"""Certified isolation of the regular real solutions of square
polynomial systems.

The solver subdivides a starting box, discards subboxes proved
rootless, certifies boxes holding exactly one root via the Krawczyk
operator with second-order interval Taylor enclosures, and escalates
the working precision when rounding noise stalls either test.  All
reported boxes are mathematically guaranteed: outward rounding at
every precision level.
"""

from .certify import (SolutionBox, check_no_solution, check_one_solution,
                      is_sol_in_list)
from .enclosure import (BoxCtx, Classification, ExtensionOrder,
                        KrawczykOutcome, KrawczykVariant, STRATEGIES,
                        Strategy, eval_order0, eval_order1, eval_order2,
                        krawczyk)
from .interval import (DivisionByZeroInterval, IBox, Interval,
                       PrecisionMismatchError)
from .mpoly import (MPoly, NonSquareError, PolySystem, SystemSyntaxError,
                    UnknownVariableError, parse_system)
from .precisionctl import (C2_SUBSET, C2_WIDTH, DEFAULT_EPS_REL,
                           PrecisionVerdict, check_prec, check_prec_t,
                           check_prec_ud)
from .randsys import random_system
from .bench import BenchRow, bench, format_table
from .solver import (NoAdmissibleDirection, SolveReport, SolverConfig,
                     Stats, UndeterminedBox, refine_solutions,
                     solve_adaptive, solve_fixed_prec)

__version__ = "0.1.0"

__all__ = [
    "BenchRow", "BoxCtx", "C2_SUBSET", "C2_WIDTH", "Classification",
    "DEFAULT_EPS_REL", "DivisionByZeroInterval", "ExtensionOrder", "IBox",
    "Interval", "KrawczykOutcome", "KrawczykVariant", "MPoly",
    "NoAdmissibleDirection", "NonSquareError", "PolySystem",
    "PrecisionMismatchError", "PrecisionVerdict", "STRATEGIES",
    "SolutionBox", "SolveReport", "SolverConfig", "Stats", "Strategy",
    "SystemSyntaxError", "UndeterminedBox", "UnknownVariableError",
    "bench", "check_no_solution", "check_one_solution", "check_prec",
    "check_prec_t", "check_prec_ud", "eval_order0", "eval_order1",
    "eval_order2", "format_table", "is_sol_in_list", "krawczyk",
    "parse_system", "random_system", "refine_solutions", "solve_adaptive",
    "solve_fixed_prec",
]
