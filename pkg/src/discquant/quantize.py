"""Quantized observables on the discrete interval model.

``Sym`` of an :class:`~discquant.discrete_model.IntervalModel` is the free
graded-commutative algebra on the site generators ``x_{s,i}`` (degree 0,
even) and the bar generators ``y_{b,i}`` (degree -1, odd).  A monomial is
an exponent tuple over all generators, evens first, odds exponents in
{0, 1}.  The odd generators of a monomial are always written in increasing
index order; products pick up the Koszul sign of sorting them.

The quantized differential is ``d = d_Q + h Delta`` where ``d_Q`` extends
``Q`` as a derivation and ``Delta`` is the odd Laplacian of the pairing
``<<-,->>``.  Word length truncation ``<= N`` gives a finite subcomplex.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Mapping, Sequence

from .discrete_model import IntervalModel, pairing_matrix
from .exact_linalg import (
    QQH,
    ExactMatrix,
    HPoly,
    format_rational,
    smith_normal_form,
    solve_unimodular,
)
from .homalg import Complex, CohomologyResult, GradedModule, NotAComplex, cohomology
from .weyl import UnknownGenerator, WeylAlgebra

__all__ = [
    "SymTruncation",
    "BDDifferential",
    "H0Module",
    "CohomClass",
    "TruncationOverflow",
    "TruncationMismatch",
    "QuantizationError",
    "WeylAlgebra",
    "UnknownGenerator",
    "bd_differential",
    "odd_laplacian",
    "poisson_bracket",
    "leibniz_defect",
    "h0",
    "weyl_normal_form",
    "phi",
    "phi_matrix",
    "phi_certificate",
    "expected_commutator",
    "bracket_from_commutator",
    "factorization_product",
    "verify_commutator",
    "classical_limit",
    "monomial_count",
]

_HBAR = HPoly((0, 1))


class QuantizationError(ArithmeticError):
    pass


class TruncationOverflow(QuantizationError):
    pass


class TruncationMismatch(ValueError):
    pass


def _add(acc: dict, key, val):
    v = acc.get(key, 0) + val
    if v:
        acc[key] = v
    else:
        acc.pop(key, None)


def _compositions_upto(total: int, parts: int):
    """Exponent tuples with ``parts`` entries and sum <= total."""
    if parts == 0:
        yield ()
        return
    for a in range(total + 1):
        for rest in _compositions_upto(total - a, parts - 1):
            yield (a,) + rest


def monomial_count(d: int, N: int) -> int:
    """Monomials of degree <= N in d commuting variables, by the closed formula."""
    from math import comb

    return comb(N + d, d)


class SymTruncation:
    """Monomials of word length <= N on the generators of a model."""

    def __init__(self, model: IntervalModel, N: int):
        if N < 0:
            raise ValueError("N must be non-negative")
        self.model = model
        self.N = N
        self.generators = list(model.labels0) + list(model.labels1)
        self.n_even = len(model.labels0)
        self.n_odd = len(model.labels1)
        self.n_gens = len(self.generators)
        self.gen_index = {g: k for k, g in enumerate(self.generators)}
        self.odd = tuple(k >= self.n_even for k in range(self.n_gens))
        B = pairing_matrix(model)
        # symmetric pairing on generator indices, only even/odd pairs are nonzero
        self.P: dict[tuple[int, int], Fraction] = {}
        for k in range(self.n_odd):
            for l in range(self.n_even):
                if B[k, l]:
                    self.P[(self.n_even + k, l)] = B[k, l]
                    self.P[(l, self.n_even + k)] = B[k, l]
        self._pair_partners: dict[int, list[tuple[int, Fraction]]] = {}
        for (a, b), p in self.P.items():
            self._pair_partners.setdefault(a, []).append((b, p))
        self._dq_memo: dict = {}
        self._lap_memo: dict = {}

    def __eq__(self, other):
        return isinstance(other, SymTruncation) and (self.model, self.N) == (other.model, other.N)

    def __hash__(self):
        return hash((self.model, self.N))

    def __repr__(self):
        return f"SymTruncation({self.model!r}, N={self.N})"

    # monomials -------------------------------------------------------
    def unit(self) -> tuple:
        return (0,) * self.n_gens

    def gen_monomial(self, label) -> tuple:
        k = self.gen_index[label]
        return tuple(int(j == k) for j in range(self.n_gens))

    def length(self, mono: tuple) -> int:
        return sum(mono)

    def degree(self, mono: tuple) -> int:
        return -sum(mono[self.n_even :])

    def parity(self, mono: tuple) -> int:
        return sum(mono[self.n_even :]) % 2

    @cached_property
    def basis(self) -> dict[int, list[tuple]]:
        """Monomials by cohomological degree, each list in a fixed order."""
        out: dict[int, list[tuple]] = {}
        for k in range(min(self.n_odd, self.N) + 1):
            odd_parts = []
            for mask in range(1 << self.n_odd):
                bits = tuple((mask >> j) & 1 for j in range(self.n_odd))
                if sum(bits) == k:
                    odd_parts.append(bits)
            odd_parts.sort(reverse=True)
            monos = []
            for ev in _compositions_upto(self.N - k, self.n_even):
                for od in odd_parts:
                    monos.append(ev + od)
            monos.sort(key=lambda m: (sum(m), tuple(-x for x in m)))
            out[-k] = monos
        return out

    @cached_property
    def index(self) -> dict[int, dict[tuple, int]]:
        return {n: {m: i for i, m in enumerate(ms)} for n, ms in self.basis.items()}

    @property
    def degrees(self) -> list[int]:
        return sorted(self.basis)

    def label(self, mono: tuple) -> str:
        parts = []
        for k, e in enumerate(mono):
            if e:
                kind, s, i = self.generators[k]
                name = f"{kind}[{s},{i}]"
                parts.append(name if e == 1 else f"{name}^{e}")
        return "*".join(parts) or "1"

    # algebra ---------------------------------------------------------
    def mono_mul(self, m1: tuple, m2: tuple):
        """``(sign, monomial)`` of the product, or None when an odd generator repeats."""
        ne = self.n_even
        inversions = 0
        seen = 0
        for k in range(ne, self.n_gens):
            if m1[k] and m2[k]:
                return None
            # each odd of m1 passes the odds of m2 with smaller index
            if m1[k]:
                inversions += seen
            if m2[k]:
                seen += 1
        return (-1 if inversions % 2 else 1), tuple(a + b for a, b in zip(m1, m2))

    def mul(self, f: Mapping, g: Mapping) -> dict:
        out: dict = {}
        for m1, c1 in f.items():
            for m2, c2 in g.items():
                r = self.mono_mul(m1, m2)
                if r is not None:
                    _add(out, r[1], c1 * c2 * r[0])
        return out

    def element(self, terms: Mapping | None = None) -> dict:
        return dict(terms or {})

    def check_element(self, f: Mapping):
        for m in f:
            if len(m) != self.n_gens or sum(m) > self.N:
                raise TruncationMismatch(f"monomial {m} is not in this truncation")

    # operators -------------------------------------------------------
    def d_q_mono(self, mono: tuple) -> dict:
        """The derivation extending ``Q``: ``y_{b,i} -> x_{b+1,i} - x_{b,i}``."""
        if mono in self._dq_memo:
            return self._dq_memo[mono]
        out: dict = {}
        ne = self.n_even
        before = 0
        for k in range(ne, self.n_gens):
            if not mono[k]:
                continue
            sign = -1 if before % 2 else 1
            before += 1
            _, b, i = self.generators[k]
            rest = list(mono)
            rest[k] = 0
            for s, c in ((b + 1, 1), (b, -1)):
                m = list(rest)
                m[self.gen_index[("x", s, i)]] += 1
                _add(out, tuple(m), Fraction(sign * c))
        self._dq_memo[mono] = out
        return out

    def laplacian_mono(self, mono: tuple) -> dict:
        """Odd Laplacian by the word formula.

        Write the monomial as a word ``w_1 ... w_p`` and sum over pairs
        ``i < j`` of ``(-1)^eps <<w_i, w_j>>`` times the word with both
        letters removed, ``eps`` being the Koszul sign of moving ``w_i`` to
        the front and then ``w_j`` right after it.
        """
        if mono in self._lap_memo:
            return self._lap_memo[mono]
        word = [k for k, e in enumerate(mono) for _ in range(e)]
        par = [1 if self.odd[k] else 0 for k in word]
        out: dict = {}
        p = len(word)
        for i in range(p):
            partners = self._pair_partners.get(word[i])
            if not partners:
                continue
            before_i = sum(par[:i])
            for j in range(i + 1, p):
                val = self.P.get((word[i], word[j]))
                if val is None:
                    continue
                before_j = sum(par[:j]) - par[i]
                eps = par[i] * before_i + par[j] * before_j
                rest = list(mono)
                rest[word[i]] -= 1
                rest[word[j]] -= 1
                _add(out, tuple(rest), val if eps % 2 == 0 else -val)
        self._lap_memo[mono] = out
        return out

    def apply(self, op, f: Mapping) -> dict:
        out: dict = {}
        for m, c in f.items():
            for m2, c2 in op(m).items():
                _add(out, m2, c * c2)
        return out

    def d_q(self, f: Mapping) -> dict:
        return self.apply(self.d_q_mono, f)

    def laplacian(self, f: Mapping) -> dict:
        return self.apply(self.laplacian_mono, f)

    def d(self, f: Mapping) -> dict:
        """``d_Q + h Delta`` on an element with HPoly coefficients."""
        out: dict = {}
        for m, c in f.items():
            c = c if isinstance(c, HPoly) else HPoly.const(c)
            for m2, v in self.d_q_mono(m).items():
                _add(out, m2, c * v)
            for m2, v in self.laplacian_mono(m).items():
                _add(out, m2, c * _HBAR * v)
        return out

    def homogeneous_parts(self, f: Mapping) -> dict[int, dict]:
        parts: dict[int, dict] = {}
        for m, c in f.items():
            parts.setdefault(self.parity(m), {})[m] = c
        return parts

    def to_json(self, f: Mapping) -> list:
        items = sorted(f.items(), key=lambda t: (sum(t[0]), tuple(-x for x in t[0])))
        out = []
        for m, c in items:
            coeff = c.to_json() if isinstance(c, HPoly) else format_rational(c)
            out.append({"monomial": self.label(m), "coeff": coeff})
        return out


def odd_laplacian(s: SymTruncation, n: int) -> ExactMatrix:
    """Matrix of Delta from degree ``n`` to degree ``n + 1``."""
    src = s.basis.get(n, [])
    tgt = s.index.get(n + 1, {})
    rows = [[Fraction(0)] * len(src) for _ in range(len(tgt))]
    for j, m in enumerate(src):
        for m2, v in s.laplacian_mono(m).items():
            rows[tgt[m2]][j] += v
    return ExactMatrix(rows, "QQ", ncols=len(src))


class BDDifferential:
    """``d = d_Q + h Delta`` on a truncation, one matrix per degree."""

    def __init__(self, s: SymTruncation, check: bool = True):
        self.trunc = s
        if check:
            bad = self.square_defects()
            if bad:
                raise NotAComplex(f"d^2 != 0 on {len(bad)} monomials, first {s.label(bad[0])}")

    def square_defects(self) -> list[tuple]:
        """Monomials on which ``d_Q^2``, ``Delta^2`` or ``d_Q Delta + Delta d_Q`` fail to vanish."""
        s = self.trunc
        bad = []
        for ms in s.basis.values():
            for m in ms:
                one = {m: Fraction(1)}
                dq, lap = s.d_q(one), s.laplacian(one)
                if s.d_q(dq) or s.laplacian(lap):
                    bad.append(m)
                    continue
                cross = s.d_q(lap)
                for k, v in s.laplacian(dq).items():
                    _add(cross, k, v)
                if cross:
                    bad.append(m)
        return bad

    def dq_matrix(self, n: int) -> ExactMatrix:
        s = self.trunc
        src = s.basis.get(n, [])
        tgt = s.index.get(n + 1, {})
        rows = [[Fraction(0)] * len(src) for _ in range(len(tgt))]
        for j, m in enumerate(src):
            for m2, v in s.d_q_mono(m).items():
                rows[tgt[m2]][j] += v
        return ExactMatrix(rows, "QQ", ncols=len(src))

    def laplacian_matrix(self, n: int) -> ExactMatrix:
        return odd_laplacian(self.trunc, n)

    def matrix(self, n: int) -> ExactMatrix:
        dq = self.dq_matrix(n).to_ring(QQH)
        lap = self.laplacian_matrix(n).to_ring(QQH).scale(_HBAR)
        return dq + lap

    @cached_property
    def complex(self) -> Complex:
        s = self.trunc
        module = GradedModule({n: tuple(ms) for n, ms in s.basis.items()}, QQH)
        d = {n: self.matrix(n) for n in s.degrees if n + 1 in s.basis}
        # d^2 = 0 was already checked monomial by monomial
        return Complex(module, d, check=False)

    def apply(self, f: Mapping) -> dict:
        return self.trunc.d(f)


def bd_differential(s: SymTruncation, check: bool = True) -> BDDifferential:
    return BDDifferential(s, check)


def poisson_bracket(s: SymTruncation, f: Mapping, g: Mapping) -> dict:
    """``{f, g} = sum_{a,b} P_ab (-1)^{|b||f|} (d_a f)(d_b g)`` with left derivatives."""
    s.check_element(f)
    s.check_element(g)
    out: dict = {}
    for pf, fh in s.homogeneous_parts(f).items():
        for (a, b), p in s.P.items():
            da = _left_derivative(s, fh, a)
            if not da:
                continue
            db = _left_derivative(s, g, b)
            if not db:
                continue
            sign = -1 if (s.odd[b] and pf) else 1
            for m, c in s.mul(da, db).items():
                _add(out, m, c * p * sign)
    return out


def _left_derivative(s: SymTruncation, f: Mapping, a: int) -> dict:
    out: dict = {}
    ne = s.n_even
    for m, c in f.items():
        e = m[a]
        if not e:
            continue
        sign = 1
        if s.odd[a] and sum(m[ne:a]) % 2:
            sign = -1
        rest = list(m)
        rest[a] -= 1
        _add(out, tuple(rest), c * e * sign)
    return out


def leibniz_defect(s: SymTruncation, f: Mapping, g: Mapping, op=None) -> dict:
    """``op(fg) - op(f) g - (-1)^{|f|} f op(g)`` for homogeneous ``f``."""
    op = op or s.d
    parts = s.homogeneous_parts(f)
    if len(parts) > 1:
        raise ValueError("f must be homogeneous")
    pf = next(iter(parts), 0)
    out = dict(op(s.mul(f, g)))
    for m, c in s.mul(op(f), g).items():
        _add(out, m, -c)
    for m, c in s.mul(f, op(g)).items():
        _add(out, m, c if pf else -c)
    return out


# ---------------------------------------------------------------------------
# H^0 and the factorization product


@dataclass(frozen=True, eq=False)
class CohomClass:
    """A class in ``H^0`` of a truncation, by coordinates in its fixed basis."""

    module: "H0Module"
    coords: tuple

    def __eq__(self, other):
        return isinstance(other, CohomClass) and self.module is other.module and self.coords == other.coords

    def __hash__(self):
        return hash(self.coords)

    def __add__(self, other: "CohomClass") -> "CohomClass":
        self.module._same(other)
        return CohomClass(self.module, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "CohomClass") -> "CohomClass":
        return self + other.scale(-1)

    def scale(self, c) -> "CohomClass":
        c = c if isinstance(c, HPoly) else HPoly.const(c)
        return CohomClass(self.module, tuple(x * c for x in self.coords))

    def __mul__(self, other: "CohomClass") -> "CohomClass":
        return factorization_product(self, other)

    @property
    def length(self) -> int:
        """Largest word length among basis elements with a nonzero coordinate (-1 for zero)."""
        return max((self.module.lengths[k] for k, c in enumerate(self.coords) if not c.is_zero()), default=-1)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coords)

    def representative(self) -> dict:
        return self.module.representative(self.coords)

    def unit_coordinate(self) -> HPoly:
        return self.coords[0]

    def to_json(self) -> dict:
        out = {}
        for k, c in enumerate(self.coords):
            if not c.is_zero():
                out[self.module.names[k]] = str(c)
        return out


class H0Module:
    """``H^0`` of a truncation with the basis of monomials at the lowest site.

    The basis is ordered like the PBW basis of the Weyl algebra: unit
    first, then by word length, descending lex in the exponents.
    """

    def __init__(self, s: SymTruncation, bd: BDDifferential | None = None):
        m = s.model
        if not m.sites:
            raise QuantizationError("the model has no sites")
        self.trunc = s
        self.bd = bd or bd_differential(s)
        self.site = m.sites[0]
        d = m.dim
        self.pbw = WeylAlgebra(m.base.c).pbw_basis(s.N)
        self.basis = [self.site_monomial(e, self.site) for e in self.pbw]
        self.lengths = [sum(e) for e in self.pbw]
        self.names = [s.label(b) for b in self.basis]
        labels0 = s.basis[0]
        lowest = set(self.basis)
        order_pos = {b: k for k, b in enumerate(self.basis)}
        others = [i for i, b in enumerate(labels0) if b not in lowest]
        mine = sorted((i for i, b in enumerate(labels0) if b in lowest), key=lambda i: order_pos[labels0[i]])
        self.result: CohomologyResult = cohomology(self.bd.complex, 0, row_priority=others + mine)
        if not self.result.is_free:
            raise QuantizationError(f"H^0 has torsion {self.result.torsion}")
        if self.result.basis_labels != self.basis:
            raise QuantizationError("H^0 basis is not the set of lowest-site monomials")
        self.rank = self.result.rank
        self.dim = d
        self._transport: dict[int, ExactMatrix] = {}

    def _same(self, other: CohomClass):
        if other.module is not self:
            raise TruncationMismatch("classes live in different truncations")

    def site_monomial(self, exps: Sequence[int], site: int) -> tuple:
        s = self.trunc
        out = [0] * s.n_gens
        for i, e in enumerate(exps):
            out[s.gen_index[("x", site, i)]] = e
        return tuple(out)

    def vector(self, f: Mapping) -> list:
        """Ambient degree-0 coordinate vector of an element."""
        s = self.trunc
        idx = s.index[0]
        v = [HPoly(())] * len(idx)
        for m, c in f.items():
            if m not in idx:
                raise TruncationMismatch(f"{s.label(m)} is not a degree-0 monomial of this truncation")
            v[idx[m]] = v[idx[m]] + (c if isinstance(c, HPoly) else HPoly.const(c))
        return v

    def cls(self, f: Mapping) -> CohomClass:
        """Class of a degree-0 element (every such element is a cocycle)."""
        return CohomClass(self, tuple(self.result.coordinates(self.vector(f))))

    def unit(self) -> CohomClass:
        return self.cls({self.trunc.unit(): HPoly.const(1)})

    def generator(self, v: Sequence, site: int | None = None) -> CohomClass:
        """``[delta_site v]``; the lowest site by default."""
        site = self.site if site is None else site
        f = {}
        for i, x in enumerate(v):
            e = [0] * self.dim
            e[i] = 1
            if x:
                _add(f, self.site_monomial(e, site), HPoly.const(x))
        return self.cls(f)

    def basis_class(self, k: int) -> CohomClass:
        one, zero = HPoly.const(1), HPoly(())
        return CohomClass(self, tuple(one if j == k else zero for j in range(self.rank)))

    def representative(self, coords: Sequence, site: int | None = None) -> dict:
        """Lowest-site representative, or the transported one at ``site``."""
        if site is None or site == self.site:
            return {b: c for b, c in zip(self.basis, coords) if not c.is_zero()}
        z = solve_unimodular(self.transport(site), list(coords))
        out = {}
        for e, c in zip(self.pbw, z):
            if not c.is_zero():
                out[self.site_monomial(e, site)] = c
        return out

    def transport(self, site: int) -> ExactMatrix:
        """Columns: classes of the basis monomials moved to ``site``.

        Local constancy makes this unimodular; it is upper triangular for
        the length filtration with identity diagonal blocks at h = 0.
        """
        if site not in self._transport:
            if site not in self.trunc.model.sites:
                raise QuantizationError(f"{site} is not a site of the model")
            cols = [self.cls({self.site_monomial(e, site): HPoly.const(1)}).coords for e in self.pbw]
            self._transport[site] = ExactMatrix.from_columns(cols, self.rank, QQH)
        return self._transport[site]

    def to_json(self) -> dict:
        return {
            "rank": self.rank,
            "free": self.result.is_free,
            "invariant_factors": [str(f) for f in self.result.invariant_factors],
            "basis": self.names,
        }


def h0(s: SymTruncation) -> H0Module:
    return H0Module(s)


def factorization_product(A: CohomClass, B: CohomClass, right_site: int | None = None) -> CohomClass:
    """Product of two ``H^0`` classes.

    ``A`` is represented at the lowest site and ``B`` at ``right_site``
    (default: the highest site); these supports are disjoint, so the
    representatives multiply in ``Sym`` and the product is reduced back
    to the basis.
    """
    H = A.module
    H._same(B)
    s = H.trunc
    if A.length + B.length > s.N:
        raise TruncationOverflow(f"lengths {A.length} + {B.length} exceed N = {s.N}")
    sites = s.model.sites
    right = sites[-1] if right_site is None else right_site
    if right == H.site:
        raise QuantizationError("the two factors need different sites")
    ra = H.representative(A.coords)
    rb = H.representative(B.coords, right)
    return H.cls(s.mul(ra, rb))


def weyl_normal_form(W: WeylAlgebra, word: Sequence[int], coeff=1, strategy: str = "left") -> dict:
    return W.normal_form(word, coeff, strategy)


def phi(x: Mapping, H: H0Module) -> CohomClass:
    """Image of a normal-form Weyl element: ``e_i -> [delta v_i]`` extended multiplicatively."""
    out = None
    for exps, c in x.items():
        if sum(exps) > H.trunc.N:
            raise TruncationOverflow(f"PBW degree {sum(exps)} exceeds N = {H.trunc.N}")
        term = _phi_monomial(H, tuple(exps)).scale(c)
        out = term if out is None else out + term
    return out if out is not None else H.unit().scale(0)


def _phi_monomial(H: H0Module, exps: tuple) -> CohomClass:
    cache = H.__dict__.setdefault("_phi_cache", {})
    if exps not in cache:
        acc = H.unit()
        for g in WeylAlgebra.word_of(exps):
            e = [0] * H.dim
            e[g] = 1
            acc = factorization_product(acc, H.generator(e))
        cache[exps] = acc
    return cache[exps]


def phi_matrix(H: H0Module) -> ExactMatrix:
    """Columns are the images of the PBW basis of degree <= N."""
    cols = [_phi_monomial(H, e).coords for e in H.pbw]
    return ExactMatrix.from_columns(cols, H.rank, QQH)


def phi_certificate(H: H0Module) -> dict:
    M = phi_matrix(H)
    sm = smith_normal_form(M)
    at0 = M.at_h(0)
    return {
        "size": M.nrows,
        "rank": sm.rank,
        "unimodular": sm.rank == M.nrows and sm.is_free(),
        "identity_mod_h": at0 == ExactMatrix.identity(M.nrows),
    }


def _pair(c, v, w) -> Fraction:
    return sum((Fraction(v[i]) * c[i][j] * Fraction(w[j]) for i in range(len(v)) for j in range(len(w))), Fraction(0))


def verify_commutator(v: Sequence, w: Sequence, H: H0Module) -> HPoly:
    """Unit coordinate of ``[phi(v), phi(w)]``; raises if any other coordinate survives."""
    if H.trunc.N < 2:
        raise TruncationOverflow("the commutator of two generators needs N >= 2")
    a, b = H.generator(v), H.generator(w)
    comm = factorization_product(a, b) - factorization_product(b, a)
    if any(not c.is_zero() for c in comm.coords[1:]):
        raise QuantizationError(f"commutator is not a multiple of the unit: {comm.to_json()}")
    return comm.coords[0]


def expected_commutator(v: Sequence, w: Sequence, c) -> HPoly:
    return HPoly((0, _pair(c, v, w)))


def classical_limit(x) -> dict:
    """Set h = 0.

    For a :class:`CohomClass` the result is a polynomial in Sym(V) keyed by
    exponent tuples, read off through the lowest-site basis.  For a Weyl
    element (dict of exponent tuples) it is the same dict at h = 0.
    """
    if isinstance(x, CohomClass):
        out = {}
        for e, c in zip(x.module.pbw, x.coords):
            c0 = c.coeff(0)
            if c0:
                out[e] = c0
        return out
    out = {}
    for k, v in x.items():
        c0 = v.coeff(0) if isinstance(v, HPoly) else Fraction(v)
        if c0:
            out[tuple(k)] = c0
    return out


def bracket_from_commutator(comm: HPoly) -> Fraction:
    """``(1/h)`` times a commutator that is divisible by h, evaluated at h = 0."""
    if comm.coeff(0):
        raise QuantizationError("commutator is not divisible by h")
    return comm.coeff(1)
