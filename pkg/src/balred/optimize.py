"""Small scalar search routines used by the norm and manifold searches."""

from __future__ import annotations

import math

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_section_min(f, a: float, b: float, xtol: float, max_iter: int = 200):
    """Golden-section minimization of f on [a, b].

    Returns (x, f(x)).  Assumes f is unimodal on the bracket; callers that
    cannot guarantee unimodality should presample and bracket first.
    """
    if b < a:
        a, b = b, a
    x1 = b - _INVPHI * (b - a)
    x2 = a + _INVPHI * (b - a)
    f1, f2 = f(x1), f(x2)
    for _ in range(max_iter):
        if b - a <= xtol:
            break
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - _INVPHI * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + _INVPHI * (b - a)
            f2 = f(x2)
    if f1 <= f2:
        return x1, f1
    return x2, f2
