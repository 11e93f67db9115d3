"""Independent reference computations used to cross-check the main code.

Each oracle reaches its answer by a different route than the function it
checks: grid search instead of a closed formula, plain enumeration instead
of a binomial coefficient, derivatives instead of a word formula, and so on.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from typing import Sequence

from .exact_linalg import HPoly, as_rational
from .geometry import Ball, INF, closures_disjoint, subset

__all__ = [
    "fits_1d_search",
    "count_monomials",
    "weyl_operator_apply",
    "weyl_elements_equal_as_operators",
    "word_operator",
    "left_derivative",
    "laplacian_by_derivatives",
]


def fits_1d_search(m: int, R, rho, step=Fraction(1, 48)):
    """Search for m disjoint open intervals of radius > R inside (-rho, rho)
    with endpoints on the grid ``step * Z``.

    Returns a witness list of ``(a, b)`` pairs or None.  Dynamic programming
    over grid points: ``best[p]`` is the largest number of intervals that fit
    in ``(-rho, g_p]``.  Every witness is re-checked with the ball predicates.
    """
    R, rho, step = as_rational(R), as_rational(rho), as_rational(step)
    if m == 0:
        return []
    lo = -rho
    n = int((2 * rho) / step)
    grid = [lo + step * p for p in range(n + 1)]
    # an interval [g_q, g_p] is long enough iff p - q >= gap
    gap = int(2 * R / step) + 1
    best = [0] * (n + 1)
    back: list = [None] * (n + 1)
    for p in range(1, n + 1):
        best[p], back[p] = best[p - 1], ("skip",)
        q = p - gap
        # best[] is nondecreasing, so the shortest admissible interval is optimal
        if q >= 0 and best[q] + 1 > best[p]:
            best[p], back[p] = best[q] + 1, ("take", q)
    if best[n] < m:
        return None
    intervals = []
    p = n
    while p > 0 and len(intervals) < m:
        if back[p][0] == "take":
            q = back[p][1]
            intervals.append((grid[q], grid[p]))
            p = q
        else:
            p -= 1
    intervals.reverse()
    _verify_intervals(intervals, R, rho)
    return intervals


def _verify_intervals(intervals, R, rho):
    balls = [Ball(((a + b) / 2,), (b - a) / 2, INF) for a, b in intervals]
    outer = Ball((0,), rho, INF)
    for b in balls:
        assert b.radius > R
        assert subset(b, outer)
    for x, y in itertools.combinations(balls, 2):
        # open intervals may share an endpoint
        assert closures_disjoint(x, y) or x.center[0] + x.radius == y.center[0] - y.radius or (
            y.center[0] + y.radius == x.center[0] - x.radius
        )


def count_monomials(nvars: int, max_degree: int) -> int:
    """Number of monomials of total degree <= max_degree, by enumeration."""
    return sum(1 for e in itertools.product(range(max_degree + 1), repeat=nvars) if sum(e) <= max_degree)


# ---------------------------------------------------------------------------
# Weyl algebra through differential operators


def _poly_add(acc: dict, key, val):
    v = acc.get(key, HPoly(())) + val
    if v.is_zero():
        acc.pop(key, None)
    else:
        acc[key] = v


def weyl_operator_apply(c, word, poly: dict) -> dict:
    """Apply ``e_{w_1} ... e_{w_k}`` to a polynomial in ``t_0..t_{d-1}``.

    ``e_i`` acts as ``t_i + (h/2) sum_j c_ij d/dt_j``, a faithful
    representation of the Weyl relations.  Polynomials are dicts from
    exponent tuples to :class:`HPoly`.
    """
    d = len(c)
    half_h = [[HPoly((0, as_rational(c[i][j]) / 2)) for j in range(d)] for i in range(d)]
    for i in reversed(word):
        out: dict = {}
        for exps, coeff in poly.items():
            up = list(exps)
            up[i] += 1
            _poly_add(out, tuple(up), coeff)
            for j in range(d):
                if exps[j] and not half_h[i][j].is_zero():
                    down = list(exps)
                    down[j] -= 1
                    _poly_add(out, tuple(down), coeff * half_h[i][j] * exps[j])
        poly = out
    return poly


def weyl_elements_equal_as_operators(c, x: dict, y: dict, order: int) -> bool:
    """Compare two normal-form elements on every monomial of degree <= order.

    A differential operator of order <= ``order`` that kills all such
    monomials is zero, so this decides equality.
    """
    d = len(c)
    for exps in itertools.product(range(order + 1), repeat=d):
        if sum(exps) > order:
            continue
        test = {tuple(exps): HPoly.const(1)}
        lhs: dict = {}
        rhs: dict = {}
        for key, coeff in x.items():
            w = tuple(g for g, a in enumerate(key) for _ in range(a))
            for k, v in weyl_operator_apply(c, w, test).items():
                _poly_add(lhs, k, v * coeff)
        for key, coeff in y.items():
            w = tuple(g for g, a in enumerate(key) for _ in range(a))
            for k, v in weyl_operator_apply(c, w, test).items():
                _poly_add(rhs, k, v * coeff)
        if lhs != rhs:
            return False
    return True


def word_operator(c, word, order: int) -> list:
    """Images of all test monomials of degree <= order under a word."""
    d = len(c)
    out = []
    for exps in itertools.product(range(order + 1), repeat=d):
        if sum(exps) <= order:
            out.append(weyl_operator_apply(c, word, {tuple(exps): HPoly.const(1)}))
    return out


# ---------------------------------------------------------------------------
# odd Laplacian through coordinate derivatives


def left_derivative(mono: tuple, a: int, odd: Sequence[bool]):
    """``d/dw_a`` acting from the left on a normal-ordered monomial.

    Returns ``(coefficient, monomial)`` or None.
    """
    e = mono[a]
    if e == 0:
        return None
    sign = 1
    if odd[a]:
        # move w_a to the front past the odd generators before it
        if sum(mono[k] for k in range(a) if odd[k]) % 2:
            sign = -1
    new = list(mono)
    new[a] -= 1
    return sign * e, tuple(new)


def laplacian_by_derivatives(mono: tuple, P: dict, odd: Sequence[bool]) -> dict:
    """``1/2 sum_{a,b} P_ab d_a d_b`` on one monomial, left derivatives.

    ``P`` maps generator index pairs ``(a, b)`` to the symmetric pairing
    value; it must contain both orders.
    """
    out: dict = {}
    for (a, b), p in P.items():
        first = left_derivative(mono, b, odd)
        if first is None:
            continue
        c1, m1 = first
        second = left_derivative(m1, a, odd)
        if second is None:
            continue
        c2, m2 = second
        val = out.get(m2, Fraction(0)) + Fraction(c1 * c2) * p / 2
        if val:
            out[m2] = val
        else:
            out.pop(m2, None)
    return out
