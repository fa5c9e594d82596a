"""Evaluation kernel for compiled Horner tapes at precision 53.

The tape is a stack program with three opcodes:

    0 PUSH_COEFF k   push the coefficient enclosure [clo[k], chi[k]]
    1 MUL_VAR i      multiply the stack top by box component i
    2 ADD            pop two intervals, push their sum

The interval arithmetic here is the very same error-free-transformation
code the scalar binary64 backend uses (`_rounding` marks those functions
jitable), so scalar and compiled evaluation round bit-for-bit
identically.  Without numba everything still runs as plain Python on the
same code paths, just slower.
"""

import numpy as np

from ._rounding import add_down, add_up, mul_down, mul_up

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]):
            return args[0]

        def wrap(f):
            return f

        return wrap


@njit(cache=True)
def _interval_mul(alo, ahi, blo, bhi):
    if not (np.isfinite(alo) and np.isfinite(ahi)
            and np.isfinite(blo) and np.isfinite(bhi)):
        return -np.inf, np.inf
    lo = mul_down(alo, blo)
    t = mul_down(alo, bhi)
    if t < lo:
        lo = t
    t = mul_down(ahi, blo)
    if t < lo:
        lo = t
    t = mul_down(ahi, bhi)
    if t < lo:
        lo = t
    hi = mul_up(alo, blo)
    t = mul_up(alo, bhi)
    if t > hi:
        hi = t
    t = mul_up(ahi, blo)
    if t > hi:
        hi = t
    t = mul_up(ahi, bhi)
    if t > hi:
        hi = t
    return lo, hi


@njit(cache=True)
def eval_tapes(opc, opa, starts, clo, chi, pids, xlo, xhi, out_lo, out_hi):
    """Evaluate the tapes selected by `pids` on the box (xlo, xhi)."""
    slo = np.empty(64, dtype=np.float64)
    shi = np.empty(64, dtype=np.float64)
    for t in range(pids.shape[0]):
        pid = pids[t]
        sp = 0
        for k in range(starts[pid], starts[pid + 1]):
            code = opc[k]
            arg = opa[k]
            if code == 0:
                slo[sp] = clo[arg]
                shi[sp] = chi[arg]
                sp += 1
            elif code == 1:
                lo, hi = _interval_mul(slo[sp - 1], shi[sp - 1],
                                       xlo[arg], xhi[arg])
                slo[sp - 1] = lo
                shi[sp - 1] = hi
            else:
                sp -= 1
                a = slo[sp - 1]
                b = slo[sp]
                c = shi[sp - 1]
                d = shi[sp]
                if np.isfinite(a) and np.isfinite(b):
                    slo[sp - 1] = add_down(a, b)
                else:
                    slo[sp - 1] = a + b
                if np.isfinite(c) and np.isfinite(d):
                    shi[sp - 1] = add_up(c, d)
                else:
                    shi[sp - 1] = c + d
        out_lo[t] = slo[0]
        out_hi[t] = shi[0]


def warm_up():
    """Force jit compilation once, so solve timings do not include it."""
    opc = np.array([0, 1, 1, 0, 2], dtype=np.int32)
    opa = np.array([0, 0, 0, 1, 0], dtype=np.int32)
    starts = np.array([0, 5], dtype=np.int64)
    clo = np.array([1.0, -2.0])
    chi = np.array([1.0, -2.0])
    pids = np.array([0], dtype=np.int64)
    out_lo = np.empty(1)
    out_hi = np.empty(1)
    eval_tapes(opc, opa, starts, clo, chi, pids,
               np.array([1.5]), np.array([1.5]), out_lo, out_hi)
    return out_lo[0], out_hi[0]
