"""Bracketed scalar root finding: bisection refined by secant steps.

The equilibrium equations solved in this package are strictly monotone in
the unknown, so a guaranteed sign-change bracket plus bisection is enough;
secant proposals inside the bracket only accelerate convergence. Whenever a
secant step fails to halve the bracket over two iterations, a bisection
step is forced, so the worst case is plain bisection at twice the iteration
count. Robustness over speed.
"""

from __future__ import annotations

from typing import Callable

from .errors import SolverError

MAX_ITER = 200
_EPS = 2.220446049250313e-16


def find_root(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    max_iter: int = MAX_ITER,
) -> float:
    """Root of f on [lo, hi], where f(lo) and f(hi) have opposite signs.

    Converges the bracket down to a few ulps (well below any tolerance used
    by the callers, which assert their own residual bounds). Endpoint zeros
    are returned directly; a same-sign bracket raises SolverError.
    """
    if not lo < hi:
        raise SolverError(f"empty bracket [{lo}, {hi}]")
    fa = f(lo)
    fb = f(hi)
    if fa == 0.0:
        return lo
    if fb == 0.0:
        return hi
    if (fa > 0.0) == (fb > 0.0):
        raise SolverError(
            f"root not bracketed on [{lo}, {hi}]: f(lo)={fa:.3e}, f(hi)={fb:.3e}"
        )
    a, b = lo, hi
    width_prev2 = 2.0 * (b - a)
    width_prev = b - a
    for _ in range(max_iter):
        width = b - a
        if width <= 4.0 * _EPS * max(1.0, abs(a), abs(b)):
            break
        if width > 0.5 * width_prev2:
            x = 0.5 * (a + b)  # slow progress: force bisection
        else:
            denom = fb - fa
            x = b - fb * (b - a) / denom if denom != 0.0 else 0.5 * (a + b)
            margin = 0.01 * width
            if not (a + margin <= x <= b - margin):
                x = 0.5 * (a + b)
        fx = f(x)
        if fx == 0.0:
            return x
        if (fx > 0.0) == (fb > 0.0):
            b, fb = x, fx
        else:
            a, fa = x, fx
        width_prev2, width_prev = width_prev, b - a
    return 0.5 * (a + b)
