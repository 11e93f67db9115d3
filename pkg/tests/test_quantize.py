import itertools
import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from discquant.discrete_model import PairedSpace, build_model
from discquant.exact_linalg import HBAR, HPoly
from discquant.homalg import Complex, cohomology
from discquant.oracles import count_monomials, laplacian_by_derivatives
from discquant.quantize import (
    QuantizationError,
    SymTruncation,
    TruncationMismatch,
    TruncationOverflow,
    WeylAlgebra,
    bd_differential,
    bracket_from_commutator,
    classical_limit,
    expected_commutator,
    factorization_product,
    h0,
    leibniz_defect,
    monomial_count,
    odd_laplacian,
    phi,
    phi_certificate,
    phi_matrix,
    poisson_bracket,
    verify_commutator,
    weyl_normal_form,
)
from discquant.sampling import random_pairing

SYMP = PairedSpace.symplectic()
ONE = HPoly.const(1)
HALF = F(1, 2)


def trunc(N, V=SYMP, a=-1, b=2):
    return SymTruncation(build_model(V, a, b), N)


def gen(s, kind, site, i):
    return {s.gen_monomial((kind, site, i)): F(1)}


def prod(s, *fs):
    out = {s.unit(): F(1)}
    for f in fs:
        out = s.mul(out, f)
    return out


def hpoly_elem(f):
    return {m: c if isinstance(c, HPoly) else HPoly.const(c) for m, c in f.items()}


# --- differential -----------------------------------------------------------


def test_d_of_bar_generator():
    s = trunc(2)
    got = s.d(gen(s, "y", 0, 0))
    want = {s.gen_monomial(("x", 1, 0)): ONE, s.gen_monomial(("x", 0, 0)): -ONE}
    assert got == want


def test_d_of_bar_times_site():
    # d(v̄_0 w_0) = (v_1 - v_0) w_0 + h/2 <v, w>
    s = trunc(2)
    f = s.mul(gen(s, "y", 0, 0), gen(s, "x", 0, 1))
    want = hpoly_elem(s.mul({s.gen_monomial(("x", 1, 0)): 1, s.gen_monomial(("x", 0, 0)): -1}, gen(s, "x", 0, 1)))
    want[s.unit()] = HBAR * HALF
    assert s.d(f) == want


def test_d_of_unit_and_short_words():
    s = trunc(3)
    assert s.d({s.unit(): ONE}) == {}
    for m in s.basis[0] + s.basis[-1]:
        if sum(m) < 2:
            assert s.laplacian({m: 1}) == {}


def test_truncation_degrees_and_sizes():
    s = trunc(2)
    assert s.degrees == [-2, -1, 0]
    # 4 site generators, 2 bar generators
    assert len(s.basis[0]) == 15
    assert len(s.basis[-1]) == 2 * 5
    assert len(s.basis[-2]) == 1


def test_matrices_form_a_complex():
    s = trunc(3)
    bd = bd_differential(s)
    c = bd.complex
    Complex(c.module, {n: c.differential(n) for n in c.degrees}, check=True)
    assert odd_laplacian(s, -1) == bd.laplacian_matrix(-1)


# --- bracket ----------------------------------------------------------------


def test_bracket_of_generators():
    # {v_0, w̄_0} = <<v_0, w̄_0>> = 1/2 <w, v>
    s = trunc(2)
    v0, wbar0 = gen(s, "x", 0, 0), gen(s, "y", 0, 1)
    assert poisson_bracket(s, v0, wbar0) == {s.unit(): -HALF}
    assert poisson_bracket(s, gen(s, "y", 0, 0), gen(s, "x", 0, 1)) == {s.unit(): HALF}


def test_bracket_with_unit_vanishes():
    s = trunc(2)
    one = {s.unit(): F(1)}
    for m in s.basis[0][:6] + s.basis[-1]:
        assert poisson_bracket(s, {m: F(1)}, one) == {}


def test_bracket_leibniz_example():
    # {v̄_0, w_0 w_0} = <v, w> w_0
    s = trunc(3)
    w0 = gen(s, "x", 0, 1)
    assert poisson_bracket(s, gen(s, "y", 0, 0), s.mul(w0, w0)) == w0


def test_bracket_rejects_foreign_monomials():
    s, t = trunc(1), trunc(3)
    big = prod(t, gen(t, "x", 0, 0), gen(t, "x", 0, 0), gen(t, "x", 0, 0))
    with pytest.raises(TruncationMismatch):
        poisson_bracket(s, big, {s.unit(): 1})


# --- random pairings --------------------------------------------------------


def _random_trunc(seed, d, N, width=3):
    V = PairedSpace(d, random_pairing(random.Random(seed), d))
    return trunc(N, V, -1, -1 + width)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 3), st.integers(1, 4))
def test_square_zero(seed, d, N):
    s = _random_trunc(seed, d, N)
    assert bd_differential(s, check=False).square_defects() == []


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 3), st.integers(2, 4))
def test_word_formula_matches_derivatives(seed, d, N):
    s = _random_trunc(seed, d, N)
    for ms in s.basis.values():
        for m in ms:
            assert s.laplacian_mono(m) == laplacian_by_derivatives(m, s.P, s.odd)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 2), st.integers(2, 4))
def test_leibniz_defect_is_h_times_bracket(seed, d, N):
    s = _random_trunc(seed, d, N)
    monos = [m for ms in s.basis.values() for m in ms]
    for f, g in itertools.product(monos, repeat=2):
        if sum(f) + sum(g) > N:
            continue
        F1, G1 = {f: F(1)}, {g: F(1)}
        br = poisson_bracket(s, F1, G1)
        full = leibniz_defect(s, hpoly_elem(F1), hpoly_elem(G1))
        assert full == {m: HBAR * c for m, c in br.items()}


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 2))
def test_bracket_symmetry_and_biderivation(seed, d):
    s = _random_trunc(seed, d, 4)
    rng = random.Random(seed)
    monos = [m for ms in s.basis.values() for m in ms if sum(m) <= 2]
    for _ in range(30):
        f, g, h = ({rng.choice(monos): F(1)} for _ in range(3))
        if sum(map(sum, (*f, *g, *h))) > 4:
            continue
        pf, pg, ph = (s.parity(next(iter(x))) for x in (f, g, h))
        # graded symmetric
        fg, gf = poisson_bracket(s, f, g), poisson_bracket(s, g, f)
        assert fg == {m: c * (-1) ** (pf * pg) for m, c in gf.items()}
        # {f, -} is a derivation of degree |f| + 1
        lhs = poisson_bracket(s, f, s.mul(g, h))
        rhs = s.mul(poisson_bracket(s, f, g), h)
        for m, c in s.mul(g, poisson_bracket(s, f, h)).items():
            sign = (-1) ** (pg * (pf + 1))
            rhs[m] = rhs.get(m, 0) + sign * c
        assert lhs == {m: c for m, c in rhs.items() if c}


# --- H^0 ----------------------------------------------------------------------


@pytest.mark.parametrize("N,rank", [(1, 3), (2, 6), (3, 10)])
def test_h0_rank(N, rank):
    H = h0(trunc(N))
    assert H.rank == rank == count_monomials(2, N) == monomial_count(2, N)
    assert H.result.is_free
    assert all(f.is_unit() for f in H.result.invariant_factors)


def test_h0_zero_space():
    H = h0(trunc(2, PairedSpace(0)))
    assert H.rank == 1
    assert H.unit().coords == (ONE,)


def test_h0_needs_a_site():
    with pytest.raises(QuantizationError):
        h0(trunc(2, SYMP, 0, 1))


def test_h0_basis_lives_at_lowest_site():
    H = h0(trunc(2))
    assert H.names == ["1", "x[0,0]", "x[0,1]", "x[0,0]^2", "x[0,0]*x[0,1]", "x[0,1]^2"]


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 3), st.integers(1, 3), st.integers(2, 4))
def test_h0_free_with_pbw_rank(seed, d, N, width):
    H = h0(_random_trunc(seed, d, N, width))
    assert H.result.is_free
    assert H.rank == count_monomials(d, N)


# --- factorization product and phi ------------------------------------------


def test_product_of_generators():
    s = trunc(2)
    H = h0(s)
    v, w = (1, 0), (0, 1)
    got = H.generator(v) * H.generator(w)
    want = H.cls(hpoly_elem(s.mul(gen(s, "x", 0, 0), gen(s, "x", 1, 1))))
    assert got == want


def test_product_unit_and_commutator():
    H = h0(trunc(3))
    a = H.generator((2, -1))
    assert H.unit() * a == a == a * H.unit()
    v, w = H.generator((1, 0)), H.generator((0, 1))
    assert v * w - w * v == H.unit().scale(HBAR)


def test_product_overflow():
    H = h0(trunc(2))
    v = H.generator((1, 0))
    with pytest.raises(TruncationOverflow):
        factorization_product(v * v, v)


def test_product_needs_same_module():
    with pytest.raises(TruncationMismatch):
        h0(trunc(2)).unit() * h0(trunc(2)).unit()


def test_product_is_independent_of_transport_site():
    H = h0(trunc(3, SYMP, -1, 4))
    assert H.trunc.model.sites == [0, 1, 2, 3]
    for i, j in itertools.product(range(H.rank), repeat=2):
        a, b = H.basis_class(i), H.basis_class(j)
        if a.length + b.length > 3:
            continue
        assert factorization_product(a, b, right_site=2) == factorization_product(a, b, right_site=3)
        assert factorization_product(a, b, right_site=1) == factorization_product(a, b)


def test_product_is_associative():
    H = h0(trunc(3))
    for i, j, k in itertools.product(range(H.rank), repeat=3):
        a, b, c = H.basis_class(i), H.basis_class(j), H.basis_class(k)
        if a.length + b.length + c.length > 3:
            continue
        assert (a * b) * c == a * (b * c)


def test_phi_examples():
    s = trunc(2)
    H = h0(s)
    W = WeylAlgebra(SYMP.c)
    assert phi(W.gen(0), H) == H.generator((1, 0))
    assert phi(W.one(), H) == H.unit()
    vw = phi(W.mul(W.gen(0), W.gen(1)), H)
    assert vw == H.cls(hpoly_elem(s.mul(gen(s, "x", 0, 0), gen(s, "x", 1, 1))))
    with pytest.raises(TruncationOverflow):
        phi(weyl_normal_form(W, [0, 0, 0]), H)


@pytest.mark.parametrize("N", [1, 2, 3])
def test_phi_is_bijective_and_identity_mod_h(N):
    cert = phi_certificate(h0(trunc(N)))
    assert cert == {"size": count_monomials(2, N), "rank": count_monomials(2, N), "unimodular": True, "identity_mod_h": True}


def test_phi_is_an_algebra_map():
    H = h0(trunc(3))
    W = WeylAlgebra(SYMP.c)
    basis = W.pbw_basis(3)
    for x, y in itertools.product(basis, repeat=2):
        if sum(x) + sum(y) > 3:
            continue
        X, Y = {x: ONE}, {y: ONE}
        assert phi(W.mul(X, Y), H) == phi(X, H) * phi(Y, H)


@pytest.mark.parametrize(
    "c,v,w,expected",
    [
        (SYMP, (1, 0), (0, 1), HBAR),
        (SYMP, (1, 0), (1, 0), HPoly(())),
        (PairedSpace.symplectic(3), (1, 0), (0, 1), HBAR * 3),
        (SYMP, (0, 1), (1, 0), -HBAR),
        (SYMP, (1, 2), (3, -1), HBAR * -7),
    ],
)
def test_verify_commutator(c, v, w, expected):
    H = h0(trunc(2, c))
    assert verify_commutator(v, w, H) == expected == expected_commutator(v, w, c.c)


def test_verify_commutator_needs_room():
    with pytest.raises(TruncationOverflow):
        verify_commutator((1, 0), (0, 1), h0(trunc(1)))


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 10**6), st.integers(2, 3))
def test_commutator_random_pairings(seed, d):
    rng = random.Random(seed)
    V = PairedSpace(d, random_pairing(rng, d))
    H = h0(trunc(2, V))
    v = [rng.randint(-3, 3) for _ in range(d)]
    w = [rng.randint(-3, 3) for _ in range(d)]
    assert verify_commutator(v, w, H) == expected_commutator(v, w, V.c)


# --- classical limit --------------------------------------------------------


def test_classical_limit_examples():
    H = h0(trunc(3))
    W = WeylAlgebra(SYMP.c)
    v, w = W.gen(0), W.gen(1)
    assert classical_limit(W.commutator(v, w)) == {}
    for e in W.pbw_basis(3):
        assert classical_limit(phi({e: ONE}, H)) == {e: 1}
    comm = verify_commutator((1, 0), (0, 1), H)
    assert bracket_from_commutator(comm) == 1


def test_classical_product_is_commutative():
    H = h0(trunc(3))
    for i, j in itertools.product(range(H.rank), repeat=2):
        a, b = H.basis_class(i), H.basis_class(j)
        if a.length + b.length <= 3:
            assert classical_limit(a * b) == classical_limit(b * a)


def test_bracket_from_commutator_rejects_nonmultiples():
    with pytest.raises(QuantizationError):
        bracket_from_commutator(HPoly((1, 1)))
