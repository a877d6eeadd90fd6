"""Independent reference computations shared by the test modules."""

import math

import numpy as np

from hifield_gates.stark import ResonanceError


def _val(f, x):
    try:
        v = f(x)
    except ResonanceError:
        return math.nan
    return math.nan if v is None else float(v)


def grid_roots(f, lo, hi, step, rel_tol=1e-6):
    """Sign changes on a dense grid, bisected to convergence; poles rejected by residual."""
    xs = np.arange(lo, hi + 0.5 * step, step)
    vs = np.array([_val(f, x) for x in xs])
    roots = []
    for k in range(len(xs) - 1):
        fa, fb = vs[k], vs[k + 1]
        if not (np.isfinite(fa) and np.isfinite(fb)) or fa * fb > 0:
            continue
        a, b = xs[k], xs[k + 1]
        ok = True
        for _ in range(80):
            m = 0.5 * (a + b)
            fm = _val(f, m)
            if not np.isfinite(fm):
                ok = False
                break
            if fm == 0:
                a = b = m
                break
            if (fm > 0) == (_val(f, a) > 0):
                a = m
            else:
                b = m
        r = 0.5 * (a + b)
        if ok and abs(_val(f, r)) <= rel_tol * max(abs(fa), abs(fb)):
            roots.append(r)
    return roots


def match_roots(found, oracle, tol):
    """(missing, spurious): oracle roots with no solver root nearby, and vice versa."""
    missing = [r for r in oracle if not any(abs(r - s) <= tol for s in found)]
    spurious = [s for s in found if not any(abs(r - s) <= tol for r in oracle)]
    return missing, spurious
