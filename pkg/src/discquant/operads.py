"""Colored operads of discs and cubes at a fixed scale, with exact validity checks.

An :class:`OperadKind` fixes the flavor (open or closed discs or cubes,
stratified discs, or lattice rectangles), the ambient dimension and the
scale ``R``.  Colors are balls (or :class:`LatticeRectangle` values) and a
multimorphism exists exactly when the sources sit disjointly inside the
target, so a :class:`Multimorphism` is just checked data.

:func:`gamma` sends a multimorphism to the corresponding point of the little
discs operad by rescaling the target to the unit ball, and :func:`to_lattice`
intersects closed cubes with the integer lattice.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .exact_linalg import ExactMatrix, QQ, as_rational, format_rational, rank, solve_unimodular
from .geometry import (
    CLOSED,
    EUCLID,
    INF,
    OPEN,
    Ball,
    closures_disjoint,
    disjoint,
    subset,
)

__all__ = [
    "OperadKind",
    "LinearStratification",
    "CornerStratification",
    "StratumClass",
    "Multimorphism",
    "LittleDiscOperation",
    "LatticeRectangle",
    "InvalidColor",
    "InvalidMultimorphism",
    "FLAVORS",
    "is_color",
    "admissible",
    "object_class",
    "class_leq",
    "is_multimorphism",
    "validity_certificate",
    "multimorphism",
    "identity",
    "compose",
    "gamma",
    "to_lattice",
    "lattice_image",
    "kind_from_json",
    "color_from_json",
]

FLAVORS = (
    "open_disc",
    "closed_disc",
    "open_cube",
    "closed_cube",
    "stratified_linear",
    "stratified_corner",
    "lattice",
)


class InvalidColor(ValueError):
    pass


class InvalidMultimorphism(ValueError):
    pass


# ---------------------------------------------------------------------------
# stratifications


def _dot(u, v) -> Fraction:
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def _dist2_to_span(z, basis) -> Fraction:
    """Exact squared euclidean distance from ``z`` to the span of ``basis``."""
    if not basis:
        return _dot(z, z)
    gram = ExactMatrix([[_dot(u, v) for v in basis] for u in basis], QQ)
    rhs = [_dot(u, z) for u in basis]
    alpha = solve_unimodular(gram, rhs)
    proj = [sum((a * u[i] for a, u in zip(alpha, basis)), Fraction(0)) for i in range(len(z))]
    return _dot(z, z) - _dot(z, proj)


@dataclass(frozen=True)
class LinearStratification:
    """A flag of rational subspaces ``X_0 ⊊ ... ⊊ X_d = R^n``.

    ``side_functionals[j]`` is a linear functional vanishing on ``X_{j-1}``
    and not on ``X_j``; it is required whenever ``X_{j-1} ⊂ X_j`` has
    codimension one and tells the two half-spaces apart.
    """

    n: int
    bases: tuple
    side_functionals: tuple

    def __init__(self, n: int, bases: Sequence[Sequence[Sequence]], side_functionals=None):
        bases = [tuple(tuple(as_rational(x) for x in v) for v in b) for b in bases]
        for b in bases:
            for v in b:
                if len(v) != n:
                    raise ValueError(f"basis vector {v} does not live in R^{n}")
            if b and rank(ExactMatrix([list(v) for v in b], QQ)) != len(b):
                raise ValueError("stratum basis is not linearly independent")
        if not bases or len(bases[-1]) < n:
            bases.append(tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)))
        for lower, upper in zip(bases, bases[1:]):
            if len(lower) >= len(upper):
                raise ValueError("strata must be strictly increasing")
            if any(_dist2_to_span(v, upper) != 0 for v in lower):
                raise ValueError("strata must be nested")
        sides = list(side_functionals or [None] * len(bases))
        sides += [None] * (len(bases) - len(sides))
        sides = [None if s is None else tuple(as_rational(x) for x in s) for s in sides]
        for j, s in enumerate(sides):
            if s is None:
                continue
            if j == 0 or len(bases[j]) - len(bases[j - 1]) != 1:
                raise ValueError(f"side functional given for stratum {j}, which is not a codimension-one step")
            if any(_dot(s, v) != 0 for v in bases[j - 1]):
                raise ValueError(f"side functional {j} does not vanish on the lower stratum")
            if all(_dot(s, v) == 0 for v in bases[j]):
                raise ValueError(f"side functional {j} vanishes on its stratum")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "bases", tuple(bases))
        object.__setattr__(self, "side_functionals", tuple(sides))

    @property
    def depth(self) -> int:
        """d, the index of the top stratum."""
        return len(self.bases) - 1

    def dim(self, j: int) -> int:
        return len(self.bases[j])

    def dist2(self, z, j: int) -> Fraction | None:
        """Squared distance to ``X_j``; None for the empty ``X_{-1}``."""
        if j < 0:
            return None
        return _dist2_to_span(z, self.bases[j])

    def stratum(self, z) -> int:
        """Least j with z in X_j."""
        z = tuple(as_rational(x) for x in z)
        for j in range(len(self.bases)):
            if self.dist2(z, j) == 0:
                return j
        raise AssertionError("the top stratum is the whole space")

    def to_json(self) -> list:
        out = []
        for b, s in zip(self.bases, self.side_functionals):
            entry = {"basis": [[format_rational(x) for x in v] for v in b]}
            if s is not None:
                entry["side_functional"] = [format_rational(x) for x in s]
            out.append(entry)
        return out


@dataclass(frozen=True)
class CornerStratification:
    """``R^p x R^q_{>=0}`` filtered by the number of positive y-coordinates."""

    p: int
    q: int

    @property
    def n(self) -> int:
        return self.p + self.q

    def positive(self, z) -> frozenset:
        """1-based indices of strictly positive y-coordinates."""
        ys = [as_rational(x) for x in z[self.p :]]
        if any(y < 0 for y in ys):
            raise InvalidColor(f"center {z} lies outside the corner")
        return frozenset(i + 1 for i, y in enumerate(ys) if y > 0)

    def stratum(self, z) -> int:
        return len(self.positive(z))


@dataclass(frozen=True)
class StratumClass:
    """Equivalence class of an admissible ball.

    ``t`` is the forgotten interval [0, t] of the flag (``-1`` forgets
    nothing); for corners it is the number of positive y-coordinates.
    ``rho`` names the component: ``"unit"``, ``"+"``/``"-"`` for a half
    space, or a frozenset of y-indices for corners.
    """

    t: int
    rho: object

    def to_json(self):
        rho = sorted(self.rho) if isinstance(self.rho, frozenset) else self.rho
        return {"t": self.t, "rho": rho}


# ---------------------------------------------------------------------------
# operad kinds


@dataclass(frozen=True)
class OperadKind:
    flavor: str
    n: int
    R: Fraction = Fraction(0)
    strat: object = None
    boundary: str = OPEN

    def __post_init__(self):
        if self.flavor not in FLAVORS:
            raise ValueError(f"unknown flavor {self.flavor!r}")
        object.__setattr__(self, "R", as_rational(self.R))
        if self.R < 0:
            raise ValueError("scale must be nonnegative")
        if self.flavor.startswith("closed"):
            object.__setattr__(self, "boundary", CLOSED)
        elif self.flavor in ("open_disc", "open_cube", "lattice"):
            object.__setattr__(self, "boundary", OPEN)
        if self.flavor == "stratified_linear" and not isinstance(self.strat, LinearStratification):
            raise ValueError("stratified_linear needs a LinearStratification")
        if self.flavor == "stratified_corner" and not isinstance(self.strat, CornerStratification):
            raise ValueError("stratified_corner needs a CornerStratification")
        if self.strat is not None and self.strat.n != self.n:
            raise ValueError("stratification dimension differs from n")

    @property
    def norm(self) -> str:
        return INF if self.flavor in ("open_cube", "closed_cube", "lattice") else EUCLID

    @property
    def closed(self) -> bool:
        return self.boundary == CLOSED

    @property
    def stratified(self) -> bool:
        return self.flavor.startswith("stratified")

    def ball(self, center, radius) -> Ball:
        """A color-shaped ball with this kind's norm and boundary."""
        return Ball(tuple(center), radius, self.norm, self.boundary)

    def to_json(self) -> dict:
        out = {"flavor": self.flavor, "R": format_rational(self.R)}
        if isinstance(self.strat, CornerStratification):
            out["n"] = [self.strat.p, self.strat.q]
        else:
            out["n"] = self.n
        if isinstance(self.strat, LinearStratification):
            out["strata"] = self.strat.to_json()
        if self.stratified:
            out["boundary"] = self.boundary
        return out


@dataclass(frozen=True)
class LatticeRectangle:
    """A product of integer intervals ``[a_i, b_i]``."""

    bounds: tuple

    def __post_init__(self):
        b = tuple((int(a), int(c)) for a, c in self.bounds)
        if any(a > c for a, c in b):
            raise ValueError("empty lattice interval")
        object.__setattr__(self, "bounds", b)

    @property
    def dim(self) -> int:
        return len(self.bounds)

    @property
    def sides(self) -> tuple:
        return tuple(c - a for a, c in self.bounds)

    def disjoint(self, other: "LatticeRectangle") -> bool:
        return any(b1 < a2 or b2 < a1 for (a1, b1), (a2, b2) in zip(self.bounds, other.bounds))

    def subset(self, other: "LatticeRectangle") -> bool:
        return all(a2 <= a1 and b1 <= b2 for (a1, b1), (a2, b2) in zip(self.bounds, other.bounds))

    def to_json(self):
        return [list(x) for x in self.bounds]


# ---------------------------------------------------------------------------
# colors and classes


def admissible(b: Ball, strat) -> bool:
    """Whether ``b`` avoids the stratum just below the one containing its center."""
    if isinstance(strat, CornerStratification):
        if b.dim != strat.n:
            raise ValueError("dimension mismatch")
        S = strat.positive(b.center)
        if not S:
            return True
        gap = min(b.center[strat.p + i - 1] for i in S)
        return gap > b.radius if b.closed else gap >= b.radius
    if isinstance(strat, LinearStratification):
        if b.dim != strat.n:
            raise ValueError("dimension mismatch")
        j = strat.stratum(b.center)
        if j == 0:
            return True
        d2 = strat.dist2(b.center, j - 1)
        r2 = b.radius * b.radius
        return d2 > r2 if b.closed else d2 >= r2
    raise TypeError(f"not a stratification: {strat!r}")


def object_class(b: Ball, strat) -> StratumClass:
    if not admissible(b, strat):
        raise InvalidColor("ball is not admissible")
    if isinstance(strat, CornerStratification):
        S = strat.positive(b.center)
        return StratumClass(len(S), S)
    j = strat.stratum(b.center)
    t = j - 1
    if t < 0 or strat.dim(j) - strat.dim(j - 1) >= 2:
        return StratumClass(t, "unit")
    phi = strat.side_functionals[j]
    if phi is None:
        raise ValueError(f"codimension-one step {j} needs a side functional")
    return StratumClass(t, "+" if _dot(phi, b.center) > 0 else "-")


def class_leq(source: StratumClass, target: StratumClass, strat) -> bool:
    """The closure order: the target's component lies in the closure of the source's."""
    if isinstance(strat, CornerStratification):
        return target.rho <= source.rho
    if source.t > target.t:
        return True
    return source.t == target.t and source.rho == target.rho


def is_color(x, kind: OperadKind) -> bool:
    if kind.flavor == "lattice":
        if not isinstance(x, LatticeRectangle):
            raise TypeError("lattice colors are LatticeRectangle values")
        if x.dim != kind.n:
            raise ValueError(f"dimension mismatch: {x.dim} vs {kind.n}")
        return all(s >= 2 for s in x.sides)
    if not isinstance(x, Ball):
        raise TypeError("disc and cube colors are Ball values")
    if x.dim != kind.n:
        raise ValueError(f"dimension mismatch: {x.dim} vs {kind.n}")
    if x.norm != kind.norm or x.boundary != kind.boundary:
        return False
    if x.radius <= kind.R:
        return False
    if kind.stratified:
        try:
            return admissible(x, kind.strat)
        except InvalidColor:
            return False
    return True


def _color_problems(sources, target, kind):
    bad = [i for i, s in enumerate(sources) if not is_color(s, kind)]
    if not is_color(target, kind):
        bad.append("target")
    return bad


def _validity(sources, target, kind: OperadKind) -> dict:
    """Certificate of the defining conditions, each entry a bool."""
    m = len(sources)
    cert: dict = {}
    if kind.flavor == "lattice":
        cert["disjoint"] = all(sources[i].disjoint(sources[j]) for i in range(m) for j in range(i + 1, m))
        cert["contained"] = all(s.subset(target) for s in sources)
        return cert
    if kind.closed:
        if m == 1 and sources[0] == target:
            cert["identity"] = True
            return cert
        cert["disjoint"] = all(closures_disjoint(sources[i], sources[j]) for i in range(m) for j in range(i + 1, m))
        cert["contained"] = all(subset(s.as_closed(), target.as_open()) for s in sources)
    else:
        cert["disjoint"] = all(disjoint(sources[i], sources[j]) for i in range(m) for j in range(i + 1, m))
        cert["contained"] = all(subset(s, target) for s in sources)
    if kind.stratified:
        tc = object_class(target, kind.strat)
        cert["class_order"] = all(class_leq(object_class(s, kind.strat), tc, kind.strat) for s in sources)
    return cert


def validity_certificate(sources: Sequence, target, kind: OperadKind) -> dict:
    """The defining conditions of a multimorphism, each a bool; inputs must be colors."""
    return _validity(tuple(sources), target, kind)


def is_multimorphism(sources: Sequence, target, kind: OperadKind) -> bool:
    """Whether ``sources -> target`` is a multimorphism of ``kind``.

    Raises :class:`InvalidColor` when some input is not a color.
    """
    sources = tuple(sources)
    bad = _color_problems(sources, target, kind)
    if bad:
        raise InvalidColor(f"not colors of {kind.flavor} at R={format_rational(kind.R)}: {bad}")
    return all(_validity(sources, target, kind).values())


@dataclass(frozen=True)
class Multimorphism:
    kind: OperadKind
    sources: tuple
    target: object
    certificate: dict = field(compare=False, hash=False, default_factory=dict)

    @property
    def arity(self) -> int:
        return len(self.sources)

    def recheck(self) -> bool:
        return is_multimorphism(self.sources, self.target, self.kind)

    def to_json(self) -> dict:
        return {"sources": [s.to_json() for s in self.sources], "target": self.target.to_json()}


def multimorphism(sources: Sequence, target, kind: OperadKind) -> Multimorphism:
    """Checked constructor."""
    sources = tuple(sources)
    bad = _color_problems(sources, target, kind)
    if bad:
        raise InvalidColor(f"not colors of {kind.flavor} at R={format_rational(kind.R)}: {bad}")
    cert = _validity(sources, target, kind)
    if not all(cert.values()):
        failed = [k for k, v in cert.items() if not v]
        raise InvalidMultimorphism(f"conditions fail: {failed}")
    return Multimorphism(kind, sources, target, cert)


def identity(color, kind: OperadKind) -> Multimorphism:
    return multimorphism((color,), color, kind)


def compose(outer: Multimorphism, inners: Sequence[Multimorphism]) -> Multimorphism:
    """Plug ``inners[i]`` into the i-th source of ``outer`` and flatten."""
    inners = list(inners)
    if len(inners) != outer.arity:
        raise ValueError(f"arity mismatch: {outer.arity} sources, {len(inners)} inner operations")
    for i, (s, op) in enumerate(zip(outer.sources, inners)):
        if op.kind != outer.kind:
            raise ValueError("cannot compose across operad kinds")
        if op.target != s:
            raise ValueError(f"inner operation {i} does not land on source {i}")
    sources = tuple(x for op in inners for x in op.sources)
    return multimorphism(sources, outer.target, outer.kind)


# ---------------------------------------------------------------------------
# little discs


@dataclass(frozen=True)
class LittleDiscOperation:
    """Affine embeddings ``x -> lam * x + v`` of the unit ball into itself."""

    maps: tuple
    n: int
    norm: str = EUCLID
    closed: bool = False

    def __post_init__(self):
        maps = tuple((as_rational(lam), tuple(as_rational(x) for x in v)) for lam, v in self.maps)
        object.__setattr__(self, "maps", maps)
        for lam, v in maps:
            if lam <= 0 or len(v) != self.n:
                raise ValueError("bad affine embedding")

    @property
    def arity(self) -> int:
        return len(self.maps)

    def images(self) -> list[Ball]:
        b = CLOSED if self.closed else OPEN
        return [Ball(v, lam, self.norm, b) for lam, v in self.maps]

    def is_valid(self) -> bool:
        unit = Ball((0,) * self.n, 1, self.norm, CLOSED if self.closed else OPEN)
        if self.closed and self.arity == 1 and self.maps[0] == (1, unit.center):
            return True
        imgs = self.images()
        if self.closed:
            inside = all(subset(b, unit.as_open()) for b in imgs)
            apart = all(closures_disjoint(imgs[i], imgs[j]) for i in range(len(imgs)) for j in range(i + 1, len(imgs)))
        else:
            inside = all(subset(b, unit) for b in imgs)
            apart = all(disjoint(imgs[i], imgs[j]) for i in range(len(imgs)) for j in range(i + 1, len(imgs)))
        return inside and apart

    def compose(self, inners: Sequence["LittleDiscOperation"]) -> "LittleDiscOperation":
        if len(inners) != self.arity:
            raise ValueError("arity mismatch")
        maps = []
        for (lam, v), op in zip(self.maps, inners):
            for mu, w in op.maps:
                maps.append((lam * mu, tuple(lam * a + b for a, b in zip(w, v))))
        return LittleDiscOperation(tuple(maps), self.n, self.norm, self.closed)

    @classmethod
    def identity(cls, n: int, norm: str = EUCLID, closed: bool = False) -> "LittleDiscOperation":
        return cls(((Fraction(1), (Fraction(0),) * n),), n, norm, closed)

    def to_json(self):
        return [{"scale": format_rational(lam), "shift": [format_rational(x) for x in v]} for lam, v in self.maps]


def gamma(m: Multimorphism) -> LittleDiscOperation:
    """Rescale the target to the unit ball: source ``(z, r)`` becomes
    ``x -> (r / r0) x + (z - z0) / r0``."""
    if m.kind.flavor == "lattice":
        raise ValueError("gamma is defined for disc and cube flavors only")
    z0, r0 = m.target.center, m.target.radius
    maps = tuple((s.radius / r0, tuple((a - b) / r0 for a, b in zip(s.center, z0))) for s in m.sources)
    return LittleDiscOperation(maps, m.kind.n, m.kind.norm, m.kind.closed)


# ---------------------------------------------------------------------------
# lattice bridge


def to_lattice(c: Ball, kind: OperadKind) -> LatticeRectangle:
    """Intersect a closed cube color with the integer lattice."""
    if kind.flavor != "closed_cube":
        raise ValueError("to_lattice needs the closed cube flavor")
    if kind.R <= Fraction(3, 2):
        raise ValueError("the lattice bridge needs R > 3/2")
    if not is_color(c, kind):
        raise InvalidColor("not a closed cube color at this scale")
    bounds = tuple((math.ceil(x - c.radius), math.floor(x + c.radius)) for x in c.center)
    return LatticeRectangle(bounds)


def lattice_image(m: Multimorphism) -> Multimorphism:
    """Image of a closed cube multimorphism in the lattice operad."""
    lk = OperadKind("lattice", m.kind.n, 0)
    return multimorphism(tuple(to_lattice(s, m.kind) for s in m.sources), to_lattice(m.target, m.kind), lk)


# ---------------------------------------------------------------------------
# JSON


def kind_from_json(data: dict) -> OperadKind:
    flavor = data["flavor"]
    R = as_rational(data.get("R", 0))
    n = data["n"]
    boundary = data.get("boundary", OPEN)
    if flavor == "stratified_corner":
        p, q = n
        return OperadKind(flavor, p + q, R, CornerStratification(p, q), boundary)
    if flavor == "stratified_linear":
        strata = data.get("strata", [])
        strat = LinearStratification(
            n,
            [s.get("basis", []) for s in strata],
            [s.get("side_functional") for s in strata],
        )
        return OperadKind(flavor, n, R, strat, boundary)
    return OperadKind(flavor, n, R)


def color_from_json(data, kind: OperadKind):
    """A color in the kind's shape; norm and boundary default to the kind's."""
    if kind.flavor == "lattice":
        return LatticeRectangle(tuple(tuple(x) for x in data))
    return Ball(
        tuple(as_rational(c) for c in data["center"]),
        as_rational(data["radius"]),
        data.get("norm", kind.norm),
        data.get("boundary", kind.boundary),
    )
