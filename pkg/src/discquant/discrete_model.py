"""Discrete de Rham model of a paired vector space on an interval.

For a finite dimensional ``V`` with an antisymmetric pairing ``c`` and an
open interval ``(a, b)``, the model is the two-term complex

    Map(Z ∩ (a, b-1), V)  --Q-->  Map(Z ∩ (a, b), V),   (Qg)(x) = g(x-1) - g(x)

in degrees -1 and 0.  Degree -1 elements are "bar" functions.  The model
carries the degree +1 symmetric pairing

    <<f̄, g>> = 1/2 sum_x <f(x-1) + f(x), g(x)>.

Site generators are labeled ``("x", s, i)`` and bar generators
``("y", s, i)`` for a site ``s`` and a basis index ``i`` of ``V``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exact_linalg import QQ, ExactMatrix, as_rational, format_rational
from .geometry import Ball, EUCLID, OPEN
from .homalg import ChainMap, Complex, GradedModule, is_quasi_iso

__all__ = [
    "PairedSpace",
    "IntervalModel",
    "ModelElement",
    "ModelError",
    "build_model",
    "integers_in",
    "integral",
    "delta",
    "delta_bar",
    "pairing",
    "pairing_matrix",
    "extension_map",
    "structure_map",
    "local_constancy_check",
    "exactness_certificate",
    "extend",
    "base_complex",
    "delta_map",
    "integral_map",
]


class ModelError(ValueError):
    pass


@dataclass(frozen=True)
class PairedSpace:
    dim: int
    c: tuple

    def __init__(self, dim: int, c: Sequence[Sequence] | None = None):
        if dim < 0:
            raise ModelError("dimension must be nonnegative")
        if c is None:
            c = [[0] * dim for _ in range(dim)]
        rows = tuple(tuple(as_rational(x) for x in r) for r in c)
        if len(rows) != dim or any(len(r) != dim for r in rows):
            raise ModelError(f"pairing must be {dim}x{dim}")
        for i in range(dim):
            for j in range(dim):
                if rows[i][j] != -rows[j][i]:
                    raise ModelError("pairing must be antisymmetric")
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "c", rows)

    @classmethod
    def symplectic(cls, scale=1) -> "PairedSpace":
        s = as_rational(scale)
        return cls(2, [[0, s], [-s, 0]])

    def pair(self, v: Sequence, w: Sequence) -> Fraction:
        return sum(
            (as_rational(v[i]) * self.c[i][j] * as_rational(w[j]) for i in range(self.dim) for j in range(self.dim)),
            Fraction(0),
        )

    def to_json(self) -> dict:
        return {"dim": self.dim, "pairing": [[format_rational(x) for x in r] for r in self.c]}

    @classmethod
    def from_json(cls, data) -> "PairedSpace":
        return cls(int(data["dim"]), data.get("pairing"))


def integers_in(a, b) -> list[int]:
    """Integers in the open interval ``(a, b)``."""
    a, b = as_rational(a), as_rational(b)
    lo = math.floor(a) + 1
    hi = math.ceil(b) - 1
    return list(range(lo, hi + 1))


class IntervalModel:
    def __init__(self, base: PairedSpace, a, b):
        a, b = as_rational(a), as_rational(b)
        if a >= b:
            raise ModelError(f"need a < b, got ({a}, {b})")
        self.base = base
        self.a, self.b = a, b
        self.sites = integers_in(a, b)
        self.bar_sites = integers_in(a, b - 1)
        d = base.dim
        self.labels0 = [("x", s, i) for s in self.sites for i in range(d)]
        self.labels1 = [("y", s, i) for s in self.bar_sites for i in range(d)]
        self._idx0 = {lab: k for k, lab in enumerate(self.labels0)}
        self._idx1 = {lab: k for k, lab in enumerate(self.labels1)}
        rows = [[Fraction(0)] * len(self.labels1) for _ in self.labels0]
        for col, (_, s, i) in enumerate(self.labels1):
            # Q(delta_s v̄) = delta_{s+1} v - delta_s v
            rows[self._idx0[("x", s, i)]][col] -= 1
            rows[self._idx0[("x", s + 1, i)]][col] += 1
        self.Q = ExactMatrix(rows, QQ, ncols=len(self.labels1))

    def __eq__(self, other):
        return isinstance(other, IntervalModel) and (self.base, self.a, self.b) == (other.base, other.a, other.b)

    def __hash__(self):
        return hash((self.base, self.a, self.b))

    def __repr__(self):
        return f"IntervalModel(({self.a}, {self.b}), dim={self.base.dim})"

    @property
    def dim(self) -> int:
        return self.base.dim

    def index0(self, s: int, i: int) -> int:
        return self._idx0[("x", s, i)]

    def index1(self, s: int, i: int) -> int:
        return self._idx1[("y", s, i)]

    def complex(self) -> Complex:
        module = GradedModule({-1: self.labels1, 0: self.labels0})
        return Complex(module, {-1: self.Q})

    def contains(self, other: "IntervalModel") -> bool:
        return self.a <= other.a and other.b <= self.b

    def as_ball(self) -> Ball:
        return Ball(((self.a + self.b) / 2,), (self.b - self.a) / 2, EUCLID, OPEN)

    def element(self, x=None, y=None) -> "ModelElement":
        x = tuple(as_rational(t) for t in x) if x is not None else (Fraction(0),) * len(self.labels0)
        y = tuple(as_rational(t) for t in y) if y is not None else (Fraction(0),) * len(self.labels1)
        return ModelElement(self, x, y)

    def to_json(self) -> dict:
        return {
            "interval": [format_rational(self.a), format_rational(self.b)],
            "sites": self.sites,
            "bar_sites": self.bar_sites,
            "Q": self.Q.to_json(),
        }


def build_model(V: PairedSpace, a, b) -> IntervalModel:
    return IntervalModel(V, a, b)


@dataclass(frozen=True)
class ModelElement:
    """Degree 0 coordinates ``x`` (over sites) and degree -1 coordinates ``y`` (over bar sites)."""

    model: IntervalModel
    x: tuple
    y: tuple

    def __post_init__(self):
        if len(self.x) != len(self.model.labels0) or len(self.y) != len(self.model.labels1):
            raise ModelError("coordinate vector has the wrong length")

    def __add__(self, other: "ModelElement") -> "ModelElement":
        if other.model != self.model:
            raise ModelError("elements of different models")
        return ModelElement(self.model, tuple(p + q for p, q in zip(self.x, other.x)), tuple(p + q for p, q in zip(self.y, other.y)))

    def scale(self, s) -> "ModelElement":
        s = as_rational(s)
        return ModelElement(self.model, tuple(s * p for p in self.x), tuple(s * p for p in self.y))

    def d(self) -> "ModelElement":
        """The differential: ``y`` goes to ``Q y`` in degree 0."""
        return ModelElement(self.model, self.model.Q.apply(self.y), (Fraction(0),) * len(self.y))

    def degree0(self) -> "ModelElement":
        return ModelElement(self.model, self.x, (Fraction(0),) * len(self.y))

    def degree_minus1(self) -> "ModelElement":
        return ModelElement(self.model, (Fraction(0),) * len(self.x), self.y)

    def value_at(self, s: int) -> tuple:
        """``f(s)`` for the degree 0 part (zero off the sites)."""
        m = self.model
        if s not in m.sites:
            return (Fraction(0),) * m.dim
        return tuple(self.x[m.index0(s, i)] for i in range(m.dim))

    def bar_value_at(self, s: int) -> tuple:
        m = self.model
        if s not in m.bar_sites:
            return (Fraction(0),) * m.dim
        return tuple(self.y[m.index1(s, i)] for i in range(m.dim))


def integral(e: ModelElement) -> tuple:
    """``∫ f = sum_n f(n)`` on the degree 0 part."""
    m = e.model
    out = [Fraction(0)] * m.dim
    for s in m.sites:
        for i, val in enumerate(e.value_at(s)):
            out[i] += val
    return tuple(out)


def delta(m: IntervalModel, t: int, v: Sequence) -> ModelElement:
    if t not in m.sites:
        raise ModelError(f"{t} is not a site of {m}")
    x = [Fraction(0)] * len(m.labels0)
    for i, val in enumerate(v):
        x[m.index0(t, i)] = as_rational(val)
    return m.element(x=x)


def delta_bar(m: IntervalModel, t: int, v: Sequence) -> ModelElement:
    if t not in m.bar_sites:
        raise ModelError(f"{t} is not a bar site of {m}")
    y = [Fraction(0)] * len(m.labels1)
    for i, val in enumerate(v):
        y[m.index1(t, i)] = as_rational(val)
    return m.element(y=y)


def pairing_matrix(m: IntervalModel) -> ExactMatrix:
    """``B[k, l] = <<y_k, x_l>>``: 1/2 c_ij when site s is b or b + 1."""
    c = m.base.c
    rows = []
    for _, b, i in m.labels1:
        row = []
        for _, s, j in m.labels0:
            row.append(c[i][j] / 2 if s in (b, b + 1) else Fraction(0))
        rows.append(row)
    return ExactMatrix(rows, QQ, ncols=len(m.labels0))


def _pair_bar(f: ModelElement, g: ModelElement) -> Fraction:
    """``<<f̄, g>>`` straight from the lattice sum."""
    m = f.model
    total = Fraction(0)
    for x in m.sites:
        a = f.bar_value_at(x - 1)
        b = f.bar_value_at(x)
        total += m.base.pair([p + q for p, q in zip(a, b)], g.value_at(x))
    return total / 2


def pairing(e1: ModelElement, e2: ModelElement) -> Fraction:
    """The symmetric degree +1 pairing; only (-1, 0) and (0, -1) parts contribute."""
    if e1.model != e2.model:
        raise ModelError("elements of different models")
    return _pair_bar(e1, e2) + _pair_bar(e2, e1)


def exactness_certificate(m: IntervalModel) -> dict:
    """Ranks in ``0 -> bar functions -Q-> functions -∫-> V -> 0``."""
    from .exact_linalg import rank

    d = m.dim
    n1, n0 = len(m.labels1), len(m.labels0)
    rank_q = rank(m.Q) if n1 and n0 else 0
    integ = ExactMatrix([[Fraction(int(i == j)) for (_, _, j) in m.labels0] for i in range(d)], QQ, ncols=n0)
    rank_int = rank(integ) if d and n0 else 0
    # composition must vanish
    composite_zero = (integ @ m.Q).is_zero() if n1 else True
    cert = {
        "injective": rank_q == n1,
        "middle": rank_q == n0 - rank_int and composite_zero,
        "surjective": rank_int == d,
    }
    cert["exact"] = all(cert.values())
    return cert


def extension_map(source: IntervalModel, target: IntervalModel) -> ChainMap:
    """Extension by zero as a chain map ``source -> target``."""
    if source.base != target.base:
        raise ModelError("models over different paired spaces")
    if not target.contains(source):
        raise ModelError(f"{source} is not contained in {target}")
    f0 = [[Fraction(0)] * len(source.labels0) for _ in target.labels0]
    for k, lab in enumerate(source.labels0):
        f0[target._idx0[lab]][k] = Fraction(1)
    f1 = [[Fraction(0)] * len(source.labels1) for _ in target.labels1]
    for k, lab in enumerate(source.labels1):
        f1[target._idx1[lab]][k] = Fraction(1)
    return ChainMap(
        source.complex(),
        target.complex(),
        {
            0: ExactMatrix(f0, QQ, ncols=len(source.labels0)),
            -1: ExactMatrix(f1, QQ, ncols=len(source.labels1)),
        },
    )


def extend(e: ModelElement, target: IntervalModel) -> ModelElement:
    f = extension_map(e.model, target)
    return ModelElement(target, f.at(0).apply(e.x), f.at(-1).apply(e.y))


def _intervals_disjoint(p: IntervalModel, q: IntervalModel) -> bool:
    return p.b <= q.a or q.b <= p.a


def structure_map(pieces: Sequence[ModelElement], target: IntervalModel, R=Fraction(1, 2)) -> ModelElement:
    """Sum of extensions by zero of elements living on disjoint subintervals.

    Every source interval (and the target) must have radius > R.
    """
    R = as_rational(R)
    models = [p.model for p in pieces]
    for i, m in enumerate(models):
        if (m.b - m.a) / 2 <= R:
            raise ModelError(f"piece {i} has radius {(m.b - m.a) / 2} <= {R}")
        if not target.contains(m):
            raise ModelError(f"piece {i} is not inside the target")
        for j in range(i):
            if not _intervals_disjoint(m, models[j]):
                raise ModelError(f"pieces {j} and {i} overlap")
    if (target.b - target.a) / 2 <= R:
        raise ModelError("target radius does not exceed the scale")
    out = target.element()
    for p in pieces:
        out = out + extend(p, target)
    return out


def local_constancy_check(source: IntervalModel, target: IntervalModel) -> bool:
    """Whether extension by zero is a quasi-isomorphism."""
    return is_quasi_iso(extension_map(source, target))


def base_complex(V: PairedSpace) -> Complex:
    """``V`` as a complex concentrated in degree 0."""
    return Complex(GradedModule({0: [("v", i) for i in range(V.dim)]}), {})


def delta_map(m: IntervalModel, t: int) -> ChainMap:
    """The chain map ``V -> model`` sending ``v`` to ``delta_t v``."""
    if t not in m.sites:
        raise ModelError(f"{t} is not a site of {m}")
    cols = [delta(m, t, [int(i == j) for j in range(m.dim)]).x for i in range(m.dim)]
    return ChainMap(base_complex(m.base), m.complex(), {0: ExactMatrix.from_columns(cols, len(m.labels0), QQ)})


def integral_map(m: IntervalModel) -> ChainMap:
    rows = [[Fraction(int(i == j)) for (_, _, j) in m.labels0] for i in range(m.dim)]
    return ChainMap(m.complex(), base_complex(m.base), {0: ExactMatrix(rows, QQ, ncols=len(m.labels0))})
