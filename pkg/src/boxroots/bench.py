"""Strategy-comparison benchmark on random dense systems.

Each cell solves the same seeded instances on [-1, 1]^m under the four
certification strategies and records the explored-box count and wall
time.  Counts are deterministic for a given (m, d, seed, strategy);
times are not.  The table layout groups columns by (m, d) and rows by
strategy; with several seeds per cell the medians are shown.
"""

import statistics
import time

from .enclosure import STRATEGIES
from .interval import IBox, Interval
from .randsys import random_system
from .solver import SolverConfig, solve_adaptive

DEFAULT_COEFF_BITS = 8


class BenchRow:
    """One solve: n is the solver's boxes_explored, t wall seconds."""

    __slots__ = ("m", "d", "strategy_id", "n", "t", "seed", "status")

    def __init__(self, m, d, strategy_id, n, t, seed, status):
        self.m = m
        self.d = d
        self.strategy_id = strategy_id
        self.n = n
        self.t = t
        self.seed = seed
        self.status = status

    def __repr__(self):
        return ("BenchRow(m=%d, d=%d, strategy=%d, n=%d, t=%.3f, seed=%d, "
                "status=%d)" % (self.m, self.d, self.strategy_id, self.n,
                                self.t, self.seed, self.status))


def _bench_config(base, strategy_id):
    base = base or SolverConfig()
    return SolverConfig(omega=base.omega, p0=base.p0, p_max=base.p_max,
                        eps_rel=base.eps_rel,
                        strategy=STRATEGIES[strategy_id],
                        c2_form=base.c2_form, pivot_tol=base.pivot_tol)


def bench(m, d, strategies=(1, 2, 3, 4), seeds=(1,), cfg=None,
          coeff_bits=DEFAULT_COEFF_BITS, progress=None):
    """Run every (seed, strategy) cell for one (m, d); returns BenchRows.

    Systems are drawn by :func:`random_system` and solved over
    [-1, 1]^m.  `cfg` supplies omega/precision knobs (its strategy
    field is ignored).  `progress`, if given, is called with each
    finished row.
    """
    rows = []
    for seed in seeds:
        system = random_system(m, d, coeff_bits, seed)
        X0 = IBox([Interval(-1.0, 1.0) for _ in range(m)])
        for sid in sorted(strategies):
            run_cfg = _bench_config(cfg, sid)
            t0 = time.perf_counter()
            report = solve_adaptive(system, run_cfg, X0)
            t = time.perf_counter() - t0
            row = BenchRow(m, d, sid, report.stats.boxes_explored, t,
                           seed, report.status)
            rows.append(row)
            if progress is not None:
                progress(row)
    return rows


def median_cells(rows):
    """{(m, d, strategy_id): (median n, median t, runs)} over seeds."""
    groups = {}
    for r in rows:
        groups.setdefault((r.m, r.d, r.strategy_id), []).append(r)
    out = {}
    for key, rs in groups.items():
        out[key] = (statistics.median(r.n for r in rs),
                    statistics.median(r.t for r in rs),
                    len(rs))
    return out


def format_table(rows):
    """Plain-text table, columns grouped by (m, d), rows by strategy."""
    cells = median_cells(rows)
    pairs = sorted({(m, d) for m, d, _ in cells})
    sids = sorted({s for _, _, s in cells})
    lines = []
    lines.append("domain [-1,1]^m, medians over seeds")
    colw = 12
    head1 = "     " + "".join(("m=%d,d=%d" % p).center(2 * colw) for p in pairs)
    head2 = "     " + "".join("n".rjust(colw) + "t(s)".rjust(colw)
                              for _ in pairs)
    lines.append(head1)
    lines.append(head2)
    for sid in sids:
        cols = []
        for p in pairs:
            cell = cells.get((p[0], p[1], sid))
            if cell is None:
                cols.append("-".rjust(colw) + "-".rjust(colw))
            else:
                n_med, t_med, _ = cell
                cols.append(("%d" % round(n_med)).rjust(colw)
                            + ("%.2f" % t_med).rjust(colw))
        lines.append("(%d)  " % sid + "".join(cols))
    return "\n".join(lines)
