"""Seeded generators of random exact instances.

All functions take a :class:`random.Random` so that callers control the
seed; nothing here reads global state.  Instances are built to satisfy the
preconditions of the operation they feed, and then re-checked with the
library predicates, retrying on the rare rejection.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .geometry import (
    CLOSED,
    EUCLID,
    INF,
    OPEN,
    Ball,
    Configuration,
    NestedChain,
    NestedConfiguration,
    closures_disjoint,
    dist2,
    dist_inf,
    poset_violations,
    sqrt_lower,
    sqrt_upper,
    validate_nested,
    zeta_membership,
)

__all__ = [
    "rand_fraction",
    "random_configuration",
    "random_eps",
    "random_nested",
    "random_lower_bound_instance",
    "random_pairing",
    "random_operation",
    "random_unimodular",
    "random_complex",
]


def rand_fraction(rng: random.Random, lo, hi, den: int = 12) -> Fraction:
    """Uniform on the grid ``Z/den`` intersected with ``[lo, hi]``."""
    a = int(Fraction(lo) * den) + (1 if Fraction(lo) * den != int(Fraction(lo) * den) and lo > 0 else 0)
    b = int(Fraction(hi) * den)
    return Fraction(rng.randint(a, b), den)


def _rand_point(rng, n, lo, hi, den=12):
    return tuple(rand_fraction(rng, lo, hi, den) for _ in range(n))


def random_eps(rng: random.Random) -> Fraction:
    return rng.choice([Fraction(1), Fraction(1, 2), Fraction(1, 100), Fraction(3)])


def random_configuration(rng: random.Random, n: int | None = None, norm: str | None = None):
    """A valid configuration at scale 0 together with a target scale ``R``.

    Radii are drawn below and above ``R`` so inflation has work to do.
    """
    n = n or rng.choice([1, 2, 3])
    norm = norm or rng.choice([EUCLID, INF])
    R = rng.choice([Fraction(0), Fraction(1, 4), Fraction(1, 2), Fraction(1), Fraction(2)])
    m = rng.randint(1, 5)
    balls: list[Ball] = []
    tries = 0
    while len(balls) < m and tries < 500:
        tries += 1
        b = Ball(_rand_point(rng, n, -6, 6), rand_fraction(rng, Fraction(1, 12), 2), norm, CLOSED)
        if all(closures_disjoint(b, o) for o in balls):
            balls.append(b)
    return Configuration(tuple(balls), 0), R


def _children_inside(rng, parent: Ball, R, count, den=48):
    """Up to ``count`` disjoint closed balls inside the open ``parent``."""
    n, norm = parent.dim, parent.norm
    kids: list[Ball] = []
    lo_r = R + Fraction(1, den)
    hi_r = parent.radius / 3
    if hi_r <= lo_r:
        return kids
    for _ in range(60 * count):
        if len(kids) == count:
            break
        r = rand_fraction(rng, lo_r, hi_r, den)
        if r <= R:
            continue
        reach = parent.radius - r
        off = tuple(rand_fraction(rng, -reach, reach, den) for _ in range(n))
        c = tuple(p + o for p, o in zip(parent.center, off))
        b = Ball(c, r, norm, CLOSED)
        inside = (
            dist_inf(c, parent.center) + r < parent.radius
            if norm == INF
            else dist2(c, parent.center) < (parent.radius - r) ** 2
        )
        if inside and all(closures_disjoint(b, o) for o in kids):
            kids.append(b)
    return kids


def random_nested(rng: random.Random, n: int, norm: str, R=None):
    """A valid nested configuration with k in 1..3 levels below the top."""
    R = Fraction(rng.choice([0, 1, 2]), 4) if R is None else Fraction(R)
    k = rng.randint(1, 3)
    # build top-down: level k-1 discs first, each mapped to index 1 or 2 at level k
    top = rng.randint(1, 2)
    level_discs: list[list[Ball]] = [[] for _ in range(k)]
    level_maps: list[list[int]] = [[] for _ in range(k)]  # maps[r] = alpha_{r+1} values for level-r indices
    roots = []
    for j in range(1, top + 1):
        for _ in range(rng.randint(1, 2)):
            roots.append(j)
    # discs of roots sharing an image must be disjoint; place on a coarse grid
    used: list[Ball] = []
    for j in roots:
        for _ in range(100):
            b = Ball(_rand_point(rng, n, -12, 12, 4), rand_fraction(rng, R + 3, R + 6, 4), norm, CLOSED)
            if all(closures_disjoint(b, o) for o in used):
                used.append(b)
                level_discs[k - 1].append(b)
                level_maps[k - 1].append(j)
                break
    # an occasional dead index at the top of the configuration
    if rng.random() < 0.3:
        level_maps[k - 1].append(0)
        level_discs[k - 1].append(None)
    for r in range(k - 1, 0, -1):
        for j, parent in enumerate(level_discs[r], start=1):
            if parent is None:
                continue
            if rng.random() < 0.25:
                level_discs[r - 1].append(parent)
                level_maps[r - 1].append(j)
                continue
            for kid in _children_inside(rng, parent, R, rng.randint(1, 3)):
                level_discs[r - 1].append(kid)
                level_maps[r - 1].append(j)
        if rng.random() < 0.3:
            level_discs[r - 1].append(None)
            level_maps[r - 1].append(0)
    chain = NestedChain(level_maps, top=top)
    discs = {}
    for r in range(k):
        for i, b in enumerate(level_discs[r], start=1):
            if b is not None:
                discs[(r, i)] = b
    nc = NestedConfiguration(chain, discs)
    assert validate_nested(nc, R) == [], validate_nested(nc, R)
    return nc, R


def _gap(nc: NestedConfiguration) -> Fraction:
    """A positive lower bound on every strict separation in ``nc``."""
    gaps = []
    items = [(key, b) for key, b in nc.discs.items() if key[0] < nc.chain.k]
    for a in range(len(items)):
        for b in range(a + 1, len(items)):
            (ka, x), (kb, y) = items[a], items[b]
            if x.same_shape(y):
                continue
            if x.norm == INF:
                d = dist_inf(x.center, y.center)
                lo_d = hi_d = d
            else:
                d2 = dist2(x.center, y.center)
                lo_d, hi_d = sqrt_lower(d2), sqrt_upper(d2)
            sep = lo_d - x.radius - y.radius
            inner = max(x.radius, y.radius) - hi_d - min(x.radius, y.radius)
            cand = max(sep, inner)
            if cand > 0:
                gaps.append(cand)
    return min(gaps, default=Fraction(1))


def _thicken(rng, nc: NestedConfiguration, delta: Fraction, den: int):
    U = {}
    for (r, i), f in nc.discs.items():
        if r >= nc.chain.k:
            continue
        margin = (r + 1) * delta - rand_fraction(rng, 0, delta / 4, den)
        shift = delta / (4 * f.dim)
        c = tuple(x + rand_fraction(rng, -shift, shift, den) for x in f.center)
        U[(r, i)] = Ball(c, f.radius + margin, f.norm, OPEN)
    return U


def random_lower_bound_instance(rng: random.Random, n: int, norm: str):
    """``(nc, U, V, R)`` with nc inside both U and V and U, V in the poset."""
    while True:
        nc, R = random_nested(rng, n, norm)
        delta = _gap(nc) / (4 * (nc.chain.k + 1))
        den = max(48, 8 * delta.denominator)
        U = _thicken(rng, nc, delta, den)
        V = U if rng.random() < 0.15 else _thicken(rng, nc, delta, den)
        if (
            zeta_membership(nc, U)
            and zeta_membership(nc, V)
            and not poset_violations(nc.chain, U, R)
            and not poset_violations(nc.chain, V, R)
        ):
            return nc, U, V, R


def random_pairing(rng: random.Random, d: int, lo: int = -3, hi: int = 3):
    """A random antisymmetric d x d matrix of small rationals."""
    c = [[Fraction(0)] * d for _ in range(d)]
    for i in range(d):
        for j in range(i + 1, d):
            x = Fraction(rng.randint(lo, hi), rng.choice([1, 1, 2, 3]))
            c[i][j], c[j][i] = x, -x
    return c


def random_operation(rng: random.Random, kind, target: Ball, count: int | None = None):
    """A multimorphism of ``kind`` into ``target`` with up to ``count`` sources.

    Returns None when no source of radius > R fits.
    """
    from .operads import multimorphism

    count = count or rng.randint(1, 3)
    if rng.random() < 0.1:
        return multimorphism((target,), target, kind)
    kids = _children_inside(rng, target.as_open(), kind.R, count)
    if not kids:
        return None
    return multimorphism(tuple(k.with_boundary(kind.boundary) for k in kids), target, kind)


def _random_scalar(rng, ring):
    from .exact_linalg import HPoly

    if ring == "QQ":
        return Fraction(rng.choice([-2, -1, 1, 1, 2, 3]), rng.choice([1, 1, 2]))
    return HPoly([Fraction(rng.randint(-2, 2)) for _ in range(rng.randint(1, 2))]) or HPoly.const(1)


def random_unimodular(rng: random.Random, n: int, ring: str, steps: int = 6):
    """``(G, G_inv)`` built from elementary operations."""
    from .exact_linalg import ExactMatrix

    G = ExactMatrix.identity(n, ring)
    Gi = ExactMatrix.identity(n, ring)
    if n < 2:
        return G, Gi
    for _ in range(steps):
        i, j = rng.sample(range(n), 2)
        q = _random_scalar(rng, ring)
        E = [list(r) for r in ExactMatrix.identity(n, ring).rows()]
        Ei = [list(r) for r in ExactMatrix.identity(n, ring).rows()]
        E[i][j] = q
        Ei[i][j] = -q
        G = ExactMatrix(E, ring) @ G
        Gi = Gi @ ExactMatrix(Ei, ring)
    return G, Gi


def random_complex(rng: random.Random, ring: str = "QQ", lo: int = -2, hi: int = 1, torsion: bool = True):
    """A random bounded complex in degrees ``lo..hi``, in disguised basis.

    Built as a sum of pieces ``0 -> R -> 0`` and ``R --f--> R``, then
    conjugated degreewise by random unimodular matrices.  Returns the
    complex and, per degree, ``(free rank, list of torsion arrows)``.
    """
    from .exact_linalg import HBAR, ExactMatrix, HPoly
    from .homalg import Complex, GradedModule

    dims = {n: 0 for n in range(lo, hi + 1)}
    free = {n: 0 for n in dims}
    arrows = []  # (n, i, j, f): generator i in degree n maps to f * generator j in degree n+1
    for n in range(lo, hi + 1):
        for _ in range(rng.randint(0, 2)):
            dims[n] += 1
            free[n] += 1
        if n < hi:
            for _ in range(rng.randint(0, 2)):
                if ring == "QQ" or not torsion:
                    f = _random_scalar(rng, "QQ")
                else:
                    f = rng.choice([HPoly.const(1), HPoly.const(2), HBAR, HBAR * HBAR, HPoly((1, 1))])
                arrows.append((n, dims[n], dims[n + 1], f))
                dims[n] += 1
                dims[n + 1] += 1
    zero = HPoly(()) if ring != "QQ" else Fraction(0)
    raw = {}
    for n in range(lo, hi):
        rows = [[zero] * dims[n] for _ in range(dims[n + 1])]
        for m, i, j, f in arrows:
            if m == n:
                rows[j][i] = f
        raw[n] = ExactMatrix(rows, ring, ncols=dims[n])
    G = {n: random_unimodular(rng, dims[n], ring) for n in dims}
    d = {n: G[n + 1][0] @ raw[n] @ G[n][1] for n in raw}
    labels = {n: [f"e{n}_{i}" for i in range(dims[n])] for n in dims}
    expected = {}
    for n in dims:
        tors = [f for m, _, _, f in arrows if m + 1 == n and not (isinstance(f, Fraction) or f.is_unit())]
        expected[n] = (free[n], tors)
    return Complex(GradedModule(labels, ring), d), expected
