"""Bounded cochain complexes over QQ and QQ[h] with labeled bases.

Differentials raise degree by one and are stored as matrices acting on
column vectors, ``d[n]`` mapping degree n to degree n+1.  Cohomology is
computed from a Smith form of the outgoing differential (for the kernel)
followed by a unit-pivot cokernel reduction of the incoming one, so that
class representatives and coordinates are deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Mapping, Sequence

from .exact_linalg import (
    QQ,
    QQH,
    CokernelReducer,
    ExactMatrix,
    HPoly,
    NoUnitPivot,
    _is_unit,
    _is_zero,
    _one,
    _zero,
    rank,
    smith_normal_form,
)

__all__ = [
    "GradedModule",
    "Complex",
    "ChainMap",
    "CohomologyResult",
    "NotAComplex",
    "NotAChainMap",
    "cone",
    "cohomology",
    "is_quasi_iso",
    "is_acyclic",
    "induced_map",
    "euler_characteristic",
    "direct_sum",
    "ranks_agree",
]


class NotAComplex(ValueError):
    pass


class NotAChainMap(ValueError):
    pass


@dataclass(frozen=True)
class GradedModule:
    """Free module with an ordered basis of labels in each degree."""

    labels: Mapping[int, tuple]
    ring: str = QQ

    def __post_init__(self):
        clean = {}
        for n, ls in self.labels.items():
            ls = tuple(ls)
            if len(set(ls)) != len(ls):
                raise ValueError(f"duplicate labels in degree {n}")
            if ls:
                clean[int(n)] = ls
        object.__setattr__(self, "labels", dict(sorted(clean.items())))
        if self.ring not in (QQ, QQH):
            raise ValueError(f"unknown ring {self.ring!r}")

    def dim(self, n: int) -> int:
        return len(self.labels.get(n, ()))

    def basis(self, n: int) -> tuple:
        return self.labels.get(n, ())

    @property
    def degrees(self) -> list[int]:
        return list(self.labels)

    def index(self, n: int, label: Hashable) -> int:
        return self.labels[n].index(label)


class Complex:
    """A cochain complex; ``d^{n+1} d^n = 0`` is checked on construction."""

    def __init__(self, module: GradedModule, d: Mapping[int, ExactMatrix], check: bool = True):
        ring = module.ring
        if any(m.ring == QQH for m in d.values()):
            ring = QQH
        if ring != module.ring:
            module = GradedModule(module.labels, ring)
        self.module = module
        self.ring = ring
        self.d: dict[int, ExactMatrix] = {}
        for n, m in d.items():
            shape = (module.dim(n + 1), module.dim(n))
            if m.shape != shape:
                raise NotAComplex(f"d^{n} has shape {m.shape}, expected {shape}")
            if not m.is_zero():
                self.d[n] = m.to_ring(ring)
        if check:
            for n in self.d:
                if n + 1 in self.d and not (self.d[n + 1] @ self.d[n]).is_zero():
                    raise NotAComplex(f"d^{n + 1} d^{n} is not zero")

    @property
    def degrees(self) -> list[int]:
        return self.module.degrees

    def dim(self, n: int) -> int:
        return self.module.dim(n)

    def differential(self, n: int) -> ExactMatrix:
        if n in self.d:
            return self.d[n]
        return ExactMatrix.zeros(self.dim(n + 1), self.dim(n), self.ring)

    def specialize(self, value=0) -> "Complex":
        """Set h to ``value``; returns a complex over QQ."""
        d = {n: m.at_h(value) for n, m in self.d.items()}
        return Complex(GradedModule(self.module.labels, QQ), d)

    def to_json(self) -> dict:
        return {
            "ring": self.ring,
            "degrees": {str(n): [str(x) for x in ls] for n, ls in self.module.labels.items()},
            "differential": {str(n): m.to_json() for n, m in sorted(self.d.items())},
        }


class ChainMap:
    """Degreewise matrices ``f[n]: A^n -> B^n`` commuting with the differentials."""

    def __init__(self, source: Complex, target: Complex, f: Mapping[int, ExactMatrix], check: bool = True):
        self.source = source
        self.target = target
        ring = QQH if QQH in (source.ring, target.ring) or any(m.ring == QQH for m in f.values()) else QQ
        self.ring = ring
        self.f: dict[int, ExactMatrix] = {}
        for n, m in f.items():
            shape = (target.dim(n), source.dim(n))
            if m.shape != shape:
                raise NotAChainMap(f"f^{n} has shape {m.shape}, expected {shape}")
            if not m.is_zero():
                self.f[n] = m.to_ring(ring)
        if check:
            for n in sorted(set(source.degrees) | set(target.degrees) | {k + 1 for k in source.degrees}):
                lhs = target.differential(n) @ self.at(n)
                rhs = self.at(n + 1) @ source.differential(n)
                if lhs.to_ring(ring) != rhs.to_ring(ring):
                    raise NotAChainMap(f"square at degree {n} does not commute")

    def at(self, n: int) -> ExactMatrix:
        if n in self.f:
            return self.f[n]
        return ExactMatrix.zeros(self.target.dim(n), self.source.dim(n), self.ring)

    @classmethod
    def identity(cls, c: Complex) -> "ChainMap":
        return cls(c, c, {n: ExactMatrix.identity(c.dim(n), c.ring) for n in c.degrees})

    def __matmul__(self, other: "ChainMap") -> "ChainMap":
        """``self @ other`` is ``self`` after ``other``."""
        if other.target is not self.source and other.target.module != self.source.module:
            raise NotAChainMap("maps are not composable")
        degrees = set(other.source.degrees)
        return ChainMap(other.source, self.target, {n: self.at(n) @ other.at(n) for n in degrees})


@dataclass
class CohomologyResult:
    """``H^n`` of a complex.

    ``rank`` is over the fraction field.  ``torsion`` lists the non-unit
    nonzero invariant factors of the quotient.  When the quotient is free,
    ``representatives`` are cocycles (ambient coordinates) whose classes form
    a basis and ``coordinates(v)`` expresses the class of a cocycle in it.
    """

    degree: int
    rank: int
    invariant_factors: tuple
    torsion: tuple
    representatives: list | None
    basis_labels: list | None
    _kernel: ExactMatrix | None = field(repr=False, default=None)
    _kernel_inv: ExactMatrix | None = field(repr=False, default=None)
    _kernel_start: int = field(repr=False, default=0)
    _reducer: CokernelReducer | None = field(repr=False, default=None)

    @property
    def is_free(self) -> bool:
        return not self.torsion

    @property
    def is_zero(self) -> bool:
        return self.rank == 0 and not self.torsion

    def coordinates(self, v: Sequence) -> tuple:
        if self._reducer is None:
            raise ValueError("coordinates need a free cohomology module")
        v = list(v)
        if self._kernel_inv is not None:
            w = self._kernel_inv.apply(v)
            if any(not _is_zero(x) for x in w[: self._kernel_start]):
                raise ValueError("vector is not a cocycle")
            v = list(w[self._kernel_start :])
        return self._reducer.coordinates(v)

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "rank": self.rank,
            "free": self.is_free,
            "torsion": [t.to_json() if isinstance(t, HPoly) else str(t) for t in self.torsion],
            "basis": None if self.basis_labels is None else [str(x) for x in self.basis_labels],
        }


def cohomology(c: Complex, n: int, row_priority: Sequence[int] | None = None) -> CohomologyResult:
    """``H^n(c)`` with deterministic representatives.

    ``row_priority`` orders the cocycle basis rows for pivot selection
    (rows visited first are eliminated first); it only applies when the
    whole of ``C^n`` consists of cocycles, which is the case used for the
    top degree of the quantized models.
    """
    ring = c.ring
    dn = c.differential(n)
    prev = c.differential(n - 1)
    kernel = kernel_inv = None
    start = 0
    if dn.is_zero():
        M = prev
        labels = list(c.module.basis(n))
    else:
        sm = smith_normal_form(dn)
        start = sm.rank
        kernel = sm.V.submatrix(range(dn.ncols), range(start, dn.ncols))
        kernel_inv = sm.V_inv
        # prev lands in the kernel; express it in the kernel basis
        coords = sm.V_inv @ prev
        if not coords.submatrix(range(start), range(prev.ncols)).is_zero():
            raise NotAComplex(f"d^{n} d^{n - 1} is not zero")
        M = coords.submatrix(range(start, dn.ncols), range(prev.ncols))
        labels = None
        row_priority = None
    dim_ker = M.nrows
    try:
        reducer = CokernelReducer(M, row_priority)
    except NoUnitPivot:
        reducer = None
    if reducer is not None:
        factors = tuple(_one(ring) for _ in range(reducer.image_rank))
        torsion: tuple = ()
        img_rank = reducer.image_rank
        rows = list(reducer.basis_rows)
    else:
        sm_img = smith_normal_form(M)
        factors = sm_img.invariant_factors
        torsion = tuple(f for f in factors if not _is_unit(f))
        img_rank = len(factors)
        if not torsion:
            # free, but greedy unit pivots got stuck: fall back to the Smith basis
            reducer = _SmithCokernel(sm_img)
        rows = None
    reps = basis_labels = None
    if reducer is not None:
        reps = []
        for v in reducer.basis_vectors():
            reps.append(v if kernel is None else kernel.apply(v))
        if labels is not None and rows is not None:
            basis_labels = [labels[r] for r in rows]
    return CohomologyResult(
        n,
        dim_ker - img_rank,
        factors,
        torsion,
        reps,
        basis_labels,
        kernel,
        kernel_inv,
        start,
        reducer,
    )


class _SmithCokernel:
    """Cokernel coordinates read off ``U M V = D``: the class of ``v`` is ``(U v)[r:]``."""

    def __init__(self, sm):
        self.sm = sm
        self.r = sm.rank

    def coordinates(self, v):
        return self.sm.U.apply(v)[self.r :]

    def basis_vectors(self):
        m = self.sm.A.nrows
        return [self.sm.U_inv.column(j) for j in range(self.r, m)]


def euler_characteristic(c: Complex) -> int:
    return sum((-1) ** (n % 2) * c.dim(n) for n in c.degrees)


def cone(f: ChainMap) -> Complex:
    """``cone(f)^n = A^{n+1} + B^n`` with ``d(a, b) = (-d_A a, f a + d_B b)``."""
    A, B = f.source, f.target
    ring = QQH if QQH in (A.ring, B.ring, f.ring) else QQ
    degrees = sorted({n - 1 for n in A.degrees} | set(B.degrees))
    labels = {n: [("src", x) for x in A.module.basis(n + 1)] + [("tgt", x) for x in B.module.basis(n)] for n in degrees}
    d = {}
    for n in degrees:
        top = ExactMatrix.block(
            [
                [-A.differential(n + 1), ExactMatrix.zeros(A.dim(n + 2), B.dim(n), ring)],
                [f.at(n + 1), B.differential(n)],
            ]
        )
        d[n] = top.to_ring(ring)
    # drop blocks that point at degrees without basis
    mod = GradedModule(labels, ring)
    d = {n: m for n, m in d.items() if m.shape == (mod.dim(n + 1), mod.dim(n))}
    return Complex(mod, d)


def is_acyclic(c: Complex) -> bool:
    return all(cohomology(c, n).is_zero for n in c.degrees)


def is_quasi_iso(f: ChainMap) -> bool:
    """Whether ``f`` induces isomorphisms on cohomology over the coefficient ring.

    Decided by acyclicity of the cone, torsion included.
    """
    return is_acyclic(cone(f))


def induced_map(f: ChainMap, n: int) -> ExactMatrix:
    """Matrix of ``H^n(f)`` in the representative bases of both sides."""
    hs = cohomology(f.source, n)
    ht = cohomology(f.target, n)
    if hs.representatives is None or ht.representatives is None:
        raise ValueError("induced_map needs free cohomology on both sides")
    cols = [ht.coordinates(f.at(n).apply(v)) for v in hs.representatives]
    ring = QQH if f.ring == QQH else QQ
    return ExactMatrix.from_columns(cols, ht.rank, ring)


def ranks_agree(f: ChainMap) -> bool:
    """Field-level check: every induced map is square of full rank."""
    for n in sorted(set(f.source.degrees) | set(f.target.degrees)):
        m = induced_map(f, n)
        if m.nrows != m.ncols or rank(m) != m.nrows:
            return False
    return True


def direct_sum(A: Complex, B: Complex):
    """``A + B`` with its inclusions and projections ``(S, iA, iB, pA, pB)``."""
    ring = QQH if QQH in (A.ring, B.ring) else QQ
    degrees = sorted(set(A.degrees) | set(B.degrees))
    labels = {n: [(0, x) for x in A.module.basis(n)] + [(1, x) for x in B.module.basis(n)] for n in degrees}
    d = {}
    for n in degrees:
        d[n] = ExactMatrix.block(
            [
                [A.differential(n).to_ring(ring), ExactMatrix.zeros(A.dim(n + 1), B.dim(n), ring)],
                [ExactMatrix.zeros(B.dim(n + 1), A.dim(n), ring), B.differential(n).to_ring(ring)],
            ]
        )
    S = Complex(GradedModule(labels, ring), d)

    def inc(first: bool):
        out = {}
        for n in degrees:
            a, b = A.dim(n), B.dim(n)
            eye = ExactMatrix.identity(a if first else b, ring)
            z = ExactMatrix.zeros(b if first else a, a if first else b, ring)
            out[n] = ExactMatrix.block([[eye], [z]] if first else [[z], [eye]])
        return out

    iA = ChainMap(A, S, inc(True))
    iB = ChainMap(B, S, inc(False))
    pA = ChainMap(S, A, {n: m.transpose() for n, m in iA.f.items()})
    pB = ChainMap(S, B, {n: m.transpose() for n, m in iB.f.items()})
    return S, iA, iB, pA, pB
