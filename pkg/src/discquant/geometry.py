"""Exact discs and cubes in R^n, configurations of them, and nested configurations.

Balls carry a norm ("euclid" for round discs, "inf" for axis-parallel
cubes) and a boundary flag.  Every predicate is decided exactly: euclidean
distances are compared through their squares, and the only place where a
square root is unavoidable (:func:`shrink_into_unit`) uses a rational upper
bound, which errs on the safe side.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from .exact_linalg import as_rational, format_rational

__all__ = [
    "EUCLID",
    "INF",
    "Ball",
    "Configuration",
    "NestedChain",
    "NestedConfiguration",
    "IndexMismatch",
    "Violation",
    "ball_relation",
    "dilate",
    "inflation_factor",
    "inflate",
    "inflation_homotopy",
    "shrink_factor",
    "shrink_into_unit",
    "validate_nested",
    "poset_violations",
    "zeta_membership",
    "lower_bound",
    "check_lower_bound",
    "fits_1d",
    "sqrt_upper",
    "sqrt_lower",
]

EUCLID = "euclid"
INF = "inf"
OPEN = "open"
CLOSED = "closed"


# ---------------------------------------------------------------------------
# exact square-root bounds


def _is_square(n: int) -> bool:
    if n < 0:
        return False
    s = math.isqrt(n)
    return s * s == n


def sqrt_upper(q, bits: int = 64) -> Fraction:
    """Rational upper bound for sqrt(q), exact when q is a rational square."""
    q = as_rational(q)
    if q < 0:
        raise ValueError("square root of a negative number")
    n, d = q.numerator, q.denominator
    if _is_square(n) and _is_square(d):
        return Fraction(math.isqrt(n), math.isqrt(d))
    scale = 1 << bits
    # sqrt(n/d) = sqrt(n*d)/d
    s = math.isqrt(n * d * scale * scale)
    return Fraction(s + 1, d * scale)


def sqrt_lower(q, bits: int = 64) -> Fraction:
    """Rational lower bound for sqrt(q), exact when q is a rational square."""
    q = as_rational(q)
    if q < 0:
        raise ValueError("square root of a negative number")
    n, d = q.numerator, q.denominator
    if _is_square(n) and _is_square(d):
        return Fraction(math.isqrt(n), math.isqrt(d))
    scale = 1 << bits
    s = math.isqrt(n * d * scale * scale)
    return Fraction(s, d * scale)


# ---------------------------------------------------------------------------
# balls


@dataclass(frozen=True)
class Ball:
    """An open or closed ball of the euclidean or sup norm.

    >>> b = Ball((0, 0), 1)
    >>> b.closed, b.norm
    (False, 'euclid')
    """

    center: tuple
    radius: Fraction
    norm: str = EUCLID
    boundary: str = OPEN

    def __post_init__(self):
        object.__setattr__(self, "center", tuple(as_rational(c) for c in self.center))
        object.__setattr__(self, "radius", as_rational(self.radius))
        if self.radius <= 0:
            raise ValueError(f"radius must be positive, got {self.radius}")
        if self.norm not in (EUCLID, INF):
            raise ValueError(f"unknown norm {self.norm!r}")
        if self.boundary not in (OPEN, CLOSED):
            raise ValueError(f"unknown boundary flag {self.boundary!r}")
        if not self.center:
            raise ValueError("a ball needs at least one coordinate")

    @property
    def dim(self) -> int:
        return len(self.center)

    @property
    def closed(self) -> bool:
        return self.boundary == CLOSED

    def with_boundary(self, boundary: str) -> "Ball":
        return Ball(self.center, self.radius, self.norm, boundary)

    def as_closed(self) -> "Ball":
        return self.with_boundary(CLOSED)

    def as_open(self) -> "Ball":
        return self.with_boundary(OPEN)

    def same_shape(self, other: "Ball") -> bool:
        """Equal center, radius and norm, ignoring the boundary flag."""
        return self.center == other.center and self.radius == other.radius and self.norm == other.norm

    def contains_point(self, p: Sequence) -> bool:
        p = tuple(as_rational(x) for x in p)
        c = _cmp_dist(self.center, p, self.radius, self.norm)
        return c <= 0 if self.closed else c < 0

    def to_json(self) -> dict:
        return {
            "center": [format_rational(c) for c in self.center],
            "radius": format_rational(self.radius),
            "norm": self.norm,
            "boundary": self.boundary,
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "Ball":
        return cls(
            tuple(as_rational(c) for c in data["center"]),
            as_rational(data["radius"]),
            data.get("norm", EUCLID),
            data.get("boundary", OPEN),
        )


def _diff(p, q):
    return [a - b for a, b in zip(p, q)]


def dist2(p, q) -> Fraction:
    return sum((a - b) ** 2 for a, b in zip(p, q))


def dist_inf(p, q) -> Fraction:
    return max((abs(a - b) for a, b in zip(p, q)), default=Fraction(0))


def _cmp_dist(p, q, s, norm) -> int:
    """Sign of ``dist(p, q) - s`` under the given norm, exactly."""
    if norm == INF:
        d = dist_inf(p, q)
        return (d > s) - (d < s)
    if s < 0:
        return 1
    d2 = dist2(p, q)
    s2 = s * s
    return (d2 > s2) - (d2 < s2)


def _check_pair(b1: Ball, b2: Ball):
    if b1.dim != b2.dim:
        raise ValueError(f"dimension mismatch: {b1.dim} vs {b2.dim}")
    if b1.norm != b2.norm:
        raise ValueError(f"norm mismatch: {b1.norm} vs {b2.norm}")


def ball_relation(b1: Ball, b2: Ball) -> str:
    """Classify the relative position of two balls of the same norm.

    Boundary flags are ignored; the answer concerns the closed shapes.
    One of ``disjoint``, ``b1_in_interior_b2``, ``b2_in_interior_b1``,
    ``equal``, ``boundary_touch``, ``overlap``.

    >>> ball_relation(Ball((0,), 1), Ball((3,), 1))
    'disjoint'
    """
    _check_pair(b1, b2)
    c, r1, r2, norm = b1.center, b1.radius, b2.radius, b1.norm
    outer = _cmp_dist(c, b2.center, r1 + r2, norm)
    if outer > 0:
        return "disjoint"
    if outer == 0:
        return "boundary_touch"
    if c == b2.center and r1 == r2:
        return "equal"
    if _cmp_dist(c, b2.center, r2 - r1, norm) < 0:
        return "b1_in_interior_b2"
    if _cmp_dist(c, b2.center, r1 - r2, norm) < 0:
        return "b2_in_interior_b1"
    if _cmp_dist(c, b2.center, abs(r1 - r2), norm) == 0:
        return "boundary_touch"
    return "overlap"


def disjoint(b1: Ball, b2: Ball) -> bool:
    """Set-theoretic disjointness, honouring the boundary flags."""
    _check_pair(b1, b2)
    c = _cmp_dist(b1.center, b2.center, b1.radius + b2.radius, b1.norm)
    if b1.closed and b2.closed:
        return c > 0
    return c >= 0


def closures_disjoint(b1: Ball, b2: Ball) -> bool:
    return disjoint(b1.as_closed(), b2.as_closed())


def subset(inner: Ball, outer: Ball) -> bool:
    """Set-theoretic inclusion ``inner ⊆ outer``, honouring the flags."""
    _check_pair(inner, outer)
    gap = outer.radius - inner.radius
    c = _cmp_dist(inner.center, outer.center, gap, inner.norm)
    if inner.closed and not outer.closed:
        return c < 0
    return c <= 0


def closure_in_interior(inner: Ball, outer: Ball) -> bool:
    """``closure(inner) ⊂ interior(outer)``."""
    return subset(inner.as_closed(), outer.as_open())


def _boundary_distance_lower(b: Ball, p: Sequence) -> Fraction:
    """A rational lower bound for ``radius - dist(center, p)``; exact for cubes."""
    if b.norm == INF:
        return b.radius - dist_inf(b.center, p)
    return b.radius - sqrt_upper(dist2(b.center, p))


# ---------------------------------------------------------------------------
# configurations


@dataclass(frozen=True)
class Configuration:
    """An ordered tuple of balls sharing dimension and norm, tagged with a scale R."""

    balls: tuple
    R: Fraction = Fraction(0)

    def __post_init__(self):
        balls = tuple(self.balls)
        object.__setattr__(self, "balls", balls)
        object.__setattr__(self, "R", as_rational(self.R))
        if self.R < 0:
            raise ValueError("scale must be nonnegative")
        if balls:
            n, norm = balls[0].dim, balls[0].norm
            for b in balls:
                if b.dim != n or b.norm != norm:
                    raise ValueError("balls of a configuration must share dimension and norm")

    def __len__(self):
        return len(self.balls)

    @property
    def radii(self) -> list[Fraction]:
        return [b.radius for b in self.balls]

    def violations(self, R=None) -> list[str]:
        """Reasons this is not a point of the R-fattened configuration space."""
        R = self.R if R is None else as_rational(R)
        out = []
        for i, b in enumerate(self.balls):
            if b.radius <= R:
                out.append(f"ball {i} has radius {format_rational(b.radius)} <= R = {format_rational(R)}")
        for i in range(len(self.balls)):
            for j in range(i + 1, len(self.balls)):
                if not closures_disjoint(self.balls[i], self.balls[j]):
                    out.append(f"balls {i} and {j} are not disjoint")
        return out

    def is_valid(self, R=None) -> bool:
        return not self.violations(R)

    def to_json(self) -> dict:
        return {"R": format_rational(self.R), "balls": [b.to_json() for b in self.balls]}


def _dilate_ball(b: Ball, lam: Fraction) -> Ball:
    return Ball(tuple(lam * c for c in b.center), lam * b.radius, b.norm, b.boundary)


def dilate(x, lam):
    """Dilate a ball, configuration or nested configuration about the origin."""
    lam = as_rational(lam)
    if lam <= 0:
        raise ValueError("dilation factor must be positive")
    if isinstance(x, Ball):
        return _dilate_ball(x, lam)
    if isinstance(x, Configuration):
        return Configuration(tuple(_dilate_ball(b, lam) for b in x.balls), x.R)
    if isinstance(x, NestedConfiguration):
        return NestedConfiguration(x.chain, {k: _dilate_ball(b, lam) for k, b in x.discs.items()})
    raise TypeError(f"cannot dilate {type(x).__name__}")


def _radii(x) -> list[Fraction]:
    if isinstance(x, Configuration):
        return x.radii
    if isinstance(x, NestedConfiguration):
        return [b.radius for b in x.discs.values()]
    raise TypeError(f"expected a configuration, got {type(x).__name__}")


def inflation_factor(x, R, eps=None) -> Fraction:
    """``eps / min(eps, r_1, ..., r_m)``; ``eps`` defaults to ``R + 1``."""
    R = as_rational(R)
    eps = R + 1 if eps is None else as_rational(eps)
    if eps <= R:
        raise ValueError("eps must exceed R")
    radii = _radii(x)
    return eps / min([eps] + radii)


def inflate(x, R, eps=None):
    """Dilate so every radius is at least ``eps > R``.  Empty input is returned as is."""
    if not _radii(x):
        return x
    out = dilate(x, inflation_factor(x, R, eps))
    if isinstance(out, Configuration):
        out = Configuration(out.balls, as_rational(R))
    return out


def inflation_homotopy(x, t, R, eps=None):
    """Dilation by ``1 - t + lam * t`` where ``lam`` is the inflation factor."""
    t = as_rational(t)
    if not 0 <= t <= 1:
        raise ValueError("t must lie in [0, 1]")
    if not _radii(x):
        return x
    lam = inflation_factor(x, R, eps)
    return dilate(x, 1 - t + lam * t)


def _far_bound(b: Ball) -> Fraction:
    """Rational upper bound for the largest distance from the origin to ``b``."""
    origin = [Fraction(0)] * b.dim
    if b.norm == INF:
        return dist_inf(b.center, origin) + b.radius
    return sqrt_upper(dist2(b.center, origin)) + b.radius


def shrink_factor(x, eps=1) -> Fraction:
    eps = as_rational(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    if isinstance(x, NestedConfiguration):
        balls = list(x.discs.values())
    elif isinstance(x, Configuration):
        balls = list(x.balls)
    else:
        raise TypeError(f"expected a configuration, got {type(x).__name__}")
    if not balls:
        raise ValueError("cannot shrink an empty configuration")
    return 1 / (max(_far_bound(b) for b in balls) + eps)


def shrink_into_unit(x, eps=1):
    """Dilate by ``1/(max_i(|z_i| + r_i) + eps)`` so that everything lands in
    the open unit ball of the ambient norm."""
    return dilate(x, shrink_factor(x, eps))


def inside_unit_ball(b: Ball) -> bool:
    """``|z| + r < 1`` decided exactly."""
    unit = Ball(tuple(Fraction(0) for _ in b.center), 1, b.norm, OPEN)
    return subset(b.as_closed(), unit)


# ---------------------------------------------------------------------------
# nested chains and configurations


class IndexMismatch(ValueError):
    """Disc labels do not match the live indices of the chain."""


@dataclass(frozen=True)
class NestedChain:
    """A chain of pointed maps <m_0> -> <m_1> -> ... -> <m_k>.

    ``maps[r-1]`` is alpha_r, a tuple of length m_{r-1} with entries in
    0..m_r, where 0 is the basepoint.  ``sizes`` is (m_0, ..., m_k).
    """

    maps: tuple
    sizes: tuple

    def __init__(self, maps: Sequence[Sequence[int]], top: int | None = None, m0: int | None = None):
        maps = tuple(tuple(int(x) for x in a) for a in maps)
        if not maps:
            sizes = (m0 or 0,)
        else:
            sizes = [len(a) for a in maps]
            last = max(maps[-1], default=0)
            if top is None:
                top = last
            sizes.append(top)
            sizes = tuple(sizes)
        for r, a in enumerate(maps, start=1):
            for x in a:
                if not 0 <= x <= sizes[r]:
                    raise ValueError(f"alpha_{r} sends an index to {x}, outside <{sizes[r]}>")
        object.__setattr__(self, "maps", maps)
        object.__setattr__(self, "sizes", sizes)

    @property
    def k(self) -> int:
        return len(self.maps)

    def alpha(self, r: int, i: int) -> int:
        """alpha_r(i), with the basepoint fixed."""
        if i == 0:
            return 0
        return self.maps[r - 1][i - 1]

    def image(self, r: int, t: int, i: int) -> int:
        """alpha_t ... alpha_{r+1}(i) for an index i at level r."""
        for s in range(r + 1, t + 1):
            i = self.alpha(s, i)
        return i

    def live(self, r: int) -> list[int]:
        """Indices at level r that survive one more step (all of them at the top)."""
        if r == self.k:
            return list(range(1, self.sizes[r] + 1))
        return [i for i in range(1, self.sizes[r] + 1) if self.alpha(r + 1, i) != 0]

    def fiber(self, r: int, j: int) -> list[int]:
        """alpha_r^{-1}(j) without the basepoint, for 1 <= r <= k."""
        return [i for i in range(1, self.sizes[r - 1] + 1) if self.alpha(r, i) == j]

    def is_active(self, r: int) -> bool:
        return all(x != 0 for x in self.maps[r - 1])

    def is_inert(self, r: int) -> bool:
        hit = [x for x in self.maps[r - 1] if x != 0]
        return sorted(hit) == list(range(1, self.sizes[r] + 1))

    def to_json(self) -> list[list[int]]:
        return [list(a) for a in self.maps]


@dataclass(frozen=True)
class NestedConfiguration:
    """Closed discs labelled by ``(r, i)`` for live indices ``i`` at levels r < k.

    Discs at the top level k are optional; when present they are checked
    like the others.
    """

    chain: NestedChain
    discs: Mapping

    def __init__(self, chain: NestedChain, discs: Mapping):
        discs = {(int(r), int(i)): b for (r, i), b in discs.items()}
        norms = {b.norm for b in discs.values()}
        dims = {b.dim for b in discs.values()}
        if len(norms) > 1 or len(dims) > 1:
            raise ValueError("discs must share dimension and norm")
        required = {(r, i) for r in range(chain.k) for i in chain.live(r)}
        allowed = required | {(chain.k, i) for i in chain.live(chain.k)}
        extra = sorted(set(discs) - allowed)
        if extra:
            raise IndexMismatch(f"labels {extra} are not live indices of the chain")
        missing = sorted(required - set(discs))
        if missing:
            raise IndexMismatch(f"live indices {missing} carry no disc")
        object.__setattr__(self, "chain", chain)
        object.__setattr__(self, "discs", dict(sorted(discs.items())))

    def keys(self):
        return list(self.discs)

    def lower_keys(self):
        """Labels at levels r < k, the ones the poset constructions act on."""
        return [key for key in self.discs if key[0] < self.chain.k]

    def ancestors(self, r: int, i: int):
        """Successive images ``(s, alpha_s...alpha_{r+1}(i))`` that carry a disc."""
        s = r
        while s < self.chain.k:
            i = self.chain.alpha(s + 1, i)
            s += 1
            if i == 0 or (s, i) not in self.discs:
                return
            yield s, i

    def to_json(self) -> dict:
        return {
            "chain": self.chain.to_json(),
            "top": self.chain.sizes[-1],
            "discs": [{"level": r, "index": i, "ball": b.to_json()} for (r, i), b in self.discs.items()],
        }


@dataclass(frozen=True)
class Violation:
    rule: str
    labels: tuple
    detail: str = ""

    def __str__(self):
        return f"{self.rule} at {list(self.labels)}: {self.detail}"


def _same_image_pairs(chain: NestedChain, r: int, labels: Iterable[int]):
    """Distinct pairs at level r whose images agree (and are not the basepoint) somewhere above."""
    labels = list(labels)
    for a in range(len(labels)):
        for b in range(a + 1, len(labels)):
            i, j = labels[a], labels[b]
            for t in range(r + 1, chain.k + 1):
                x = chain.image(r, t, i)
                if x != 0 and x == chain.image(r, t, j):
                    yield i, j
                    break


def _nesting_violations(chain: NestedChain, balls: Mapping, R, strict_closure: bool) -> list[Violation]:
    """Shared checker for nested configurations (closed discs) and for tuples
    of open balls in the indexing poset."""
    out: list[Violation] = []
    for (r, i), b in balls.items():
        if b.radius <= R:
            out.append(Violation("radius", ((r, i),), f"{format_rational(b.radius)} <= R = {format_rational(R)}"))
    levels = sorted({r for r, _ in balls})
    for r in levels:
        labels = [i for (s, i) in balls if s == r]
        for i, j in _same_image_pairs(chain, r, labels):
            if not closures_disjoint(balls[(r, i)], balls[(r, j)]):
                out.append(Violation("disjointness", ((r, i), (r, j)), "closures meet"))
    for (r, j), parent in balls.items():
        if r == 0:
            continue
        kids = [i for i in chain.fiber(r, j) if (r - 1, i) in balls]
        if len(kids) == 1 and balls[(r - 1, kids[0])].same_shape(parent):
            continue
        for i in kids:
            child = balls[(r - 1, i)]
            if child.same_shape(parent):
                out.append(Violation("singleton_fiber", ((r - 1, i), (r, j)), f"equal discs but fiber has size {len(kids)}"))
            elif not closure_in_interior(child, parent):
                out.append(Violation("containment", ((r - 1, i), (r, j)), "closure of child not inside open parent"))
    return out


def validate_nested(nc: NestedConfiguration, R) -> list[Violation]:
    """Violations of the three defining conditions; empty means valid."""
    return _nesting_violations(nc.chain, nc.discs, as_rational(R), True)


def poset_violations(chain: NestedChain, U: Mapping, R=0) -> list[Violation]:
    """Violations for a tuple of open balls indexed like a nested configuration
    (the indexing poset of the cofilteredness argument)."""
    return _nesting_violations(chain, U, as_rational(R), True)


def zeta_membership(nc: NestedConfiguration, U: Mapping, stratum_of: Callable | None = None) -> bool:
    """Whether every disc of ``nc`` below the top level lies in its open ball of ``U``.

    With ``stratum_of`` (a function from points to stratum labels) the
    centers must also lie in matching strata.
    """
    keys = nc.lower_keys()
    missing = [key for key in keys if key not in U]
    if missing:
        raise IndexMismatch(f"U has no ball for labels {missing}")
    for key in keys:
        f, u = nc.discs[key], U[key]
        if not subset(f.as_closed(), u.as_open()):
            return False
        if stratum_of is not None and stratum_of(f.center) != stratum_of(u.center):
            return False
    return True


def _equality_chain(nc: NestedConfiguration, r: int, i: int):
    """Labels above (r, i) holding the very same disc, and the first ancestor that is strictly bigger."""
    same = [(r, i)]
    f = nc.discs[(r, i)]
    for s, j in nc.ancestors(r, i):
        if s >= nc.chain.k:
            break
        g = nc.discs[(s, j)]
        if g.same_shape(f):
            same.append((s, j))
        else:
            return same, (s, j)
    return same, None


def _max_radius(center, constraints: list[Ball]) -> Fraction:
    """Largest radius, rounded down, of a ball at ``center`` inside every
    open ball in ``constraints``."""
    return min(_boundary_distance_lower(b, center) for b in constraints)


def lower_bound(nc: NestedConfiguration, U: Mapping, V: Mapping, R=0) -> dict:
    """A tuple ``W`` below both ``U`` and ``V`` still containing ``nc``.

    Level by level: a disc equal to its unique child reuses the child's
    ball; any other disc is expanded concentrically to the midpoint between
    its radius and the largest radius allowed by ``U ∩ V`` along its chain
    of equal discs and by the first strictly larger ancestor.
    """
    R = as_rational(R)
    if not zeta_membership(nc, U) or not zeta_membership(nc, V):
        raise ValueError("nested configuration is not inside both U and V")
    W: dict = {}
    k = nc.chain.k
    for r in range(k):
        for i in nc.chain.live(r):
            f = nc.discs[(r, i)]
            if r > 0:
                kids = nc.chain.fiber(r, i)
                if len(kids) == 1 and nc.discs[(r - 1, kids[0])].same_shape(f):
                    W[(r, i)] = W[(r - 1, kids[0])]
                    continue
            same, parent = _equality_chain(nc, r, i)
            constraints = [U[key] for key in same] + [V[key] for key in same]
            if parent is not None:
                constraints.append(nc.discs[parent].as_open())
            top = _max_radius(f.center, constraints)
            bits = 64
            # sqrt bounds are outward-rounded; refine until the room is visible
            while top <= f.radius and f.norm == EUCLID and bits <= 4096:
                bits *= 2
                top = min(b.radius - sqrt_upper(dist2(b.center, f.center), bits) for b in constraints)
            if top <= f.radius:
                raise ValueError(f"no room to expand disc {(r, i)}")
            W[(r, i)] = Ball(f.center, (f.radius + top) / 2, f.norm, OPEN)
    return W


def check_lower_bound(nc: NestedConfiguration, U: Mapping, V: Mapping, W: Mapping) -> list[Violation]:
    """The conditions (a), (b), (c) a lower bound must meet; empty means it passes."""
    out: list[Violation] = []
    keys = nc.lower_keys()
    for key in keys:
        if key not in W:
            out.append(Violation("a", (key,), "missing ball"))
            continue
        w = W[key]
        if not subset(nc.discs[key].as_closed(), w.as_open()):
            out.append(Violation("a", (key,), "disc not inside W"))
        for name, T in (("U", U), ("V", V)):
            if not subset(w.as_closed(), T[key].as_open()):
                out.append(Violation("b", (key,), f"closure of W not inside {name}"))
    chain = nc.chain
    for r in range(1, chain.k):
        for j in chain.live(r):
            if (r, j) not in W:
                continue
            kids = [i for i in chain.fiber(r, j) if (r - 1, i) in W]
            if len(kids) == 1 and W[(r - 1, kids[0])].same_shape(W[(r, j)]):
                continue
            for i in kids:
                if W[(r - 1, i)].same_shape(W[(r, j)]):
                    out.append(Violation("c", ((r - 1, i), (r, j)), "equality with a fiber of size > 1"))
                elif not subset(W[(r - 1, i)].as_closed(), W[(r, j)].as_open()):
                    out.append(Violation("c", ((r - 1, i), (r, j)), "closure of child not inside parent"))
            # the children of a strict containment must be pairwise disjoint
            for a in range(len(kids)):
                for b in range(a + 1, len(kids)):
                    if not closures_disjoint(W[(r - 1, kids[a])], W[(r - 1, kids[b])]):
                        out.append(Violation("c", ((r - 1, kids[a]), (r - 1, kids[b])), "children meet"))
    return out


# ---------------------------------------------------------------------------
# one-dimensional packing


def fits_1d(m: int, R, rho) -> bool:
    """Whether m disjoint open intervals of radius > R fit in an open interval of radius rho."""
    R, rho = as_rational(R), as_rational(rho)
    if m < 0 or R < 0 or rho <= 0:
        raise ValueError("need m >= 0, R >= 0 and rho > 0")
    if m == 0:
        return True
    return rho > m * R
