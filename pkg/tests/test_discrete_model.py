import itertools
import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from discquant.discrete_model import (
    ModelError,
    PairedSpace,
    build_model,
    delta,
    delta_bar,
    delta_map,
    exactness_certificate,
    extend,
    extension_map,
    integral,
    integral_map,
    local_constancy_check,
    pairing,
    pairing_matrix,
    structure_map,
)
from discquant.exact_linalg import ExactMatrix
from discquant.homalg import ChainMap, cohomology, cone, is_quasi_iso
from discquant.sampling import random_pairing

LINE = PairedSpace(1)
SYMP = PairedSpace.symplectic()
HALF = F(1, 2)


@pytest.mark.parametrize(
    "a,b,sites,bars",
    [
        (-1, 2, [0, 1], [0]),
        (F(2, 5), F(3, 2), [1], []),
        (0, 1, [], []),
        (0, 3, [1, 2], [1]),
        (F(-1, 2), F(7, 2), [0, 1, 2, 3], [0, 1, 2]),
    ],
)
def test_sites(a, b, sites, bars):
    m = build_model(LINE, a, b)
    assert m.sites == sites and m.bar_sites == bars


def test_q_matrix_example():
    m = build_model(LINE, -1, 2)
    assert m.Q == ExactMatrix([[F(-1)], [F(1)]])
    assert build_model(LINE, F(2, 5), F(3, 2)).Q.shape == (1, 0)


def test_bad_interval():
    with pytest.raises(ModelError):
        build_model(LINE, 2, 2)
    with pytest.raises(ModelError):
        PairedSpace(2, [[0, 1], [1, 0]])


def test_integral_and_delta():
    m = build_model(SYMP, -1, 2)
    v = (F(3), F(-2))
    assert integral(delta(m, 0, v)) == v
    assert integral(delta_bar(m, 0, v).d()) == (0, 0)
    assert delta(m, 1, v).x == (0, 0, 3, -2)
    with pytest.raises(ModelError):
        delta(m, 2, v)


def test_cone_of_q_has_h0_equal_v():
    m = build_model(SYMP, -1, 2)
    c = m.complex()
    assert cohomology(c, 0).rank == 2
    assert cohomology(c, -1).rank == 0


def test_pairing_examples():
    m = build_model(SYMP, -2, 4)
    v, w = (1, 0), (0, 1)
    pvw = SYMP.pair(v, w)
    assert pvw == 1
    assert pairing(delta_bar(m, 0, v), delta(m, 0, w)) == pvw / 2
    assert pairing(delta_bar(m, 0, v), delta(m, 1, w)) == pvw / 2
    assert pairing(delta_bar(m, 0, v), delta(m, 2, w)) == 0
    # symmetric, and zero on equal degrees
    assert pairing(delta(m, 0, w), delta_bar(m, 0, v)) == pvw / 2
    assert pairing(delta(m, 0, w), delta(m, 0, v)) == 0
    assert pairing(delta_bar(m, 0, w), delta_bar(m, 1, v)) == 0


def test_pairing_matrix_matches_lattice_sum():
    rng = random.Random(3)
    V = PairedSpace(3, random_pairing(rng, 3))
    m = build_model(V, -2, 3)
    B = pairing_matrix(m)
    for k, (_, b, i) in enumerate(m.labels1):
        for l, (_, s, j) in enumerate(m.labels0):
            y = [0] * len(m.labels1)
            y[k] = 1
            x = [0] * len(m.labels0)
            x[l] = 1
            assert B[k, l] == pairing(m.element(y=y), m.element(x=x))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 3), st.integers(-3, 0), st.integers(1, 6))
def test_pairing_is_a_chain_map(seed, d, a, width):
    # <<Qf, ḡ>> - <<f̄, Qg>> = 0 for bar functions f, g
    V = PairedSpace(d, random_pairing(random.Random(seed), d))
    m = build_model(V, a, a + width)
    basis = [m.element(y=[int(k == j) for k in range(len(m.labels1))]) for j in range(len(m.labels1))]
    for f, g in itertools.product(basis, repeat=2):
        assert pairing(f.d(), g) - pairing(f, g.d()) == 0


@pytest.mark.parametrize("a", [-3, -1, 0, 2])
@pytest.mark.parametrize("width", [2, 3, 4, 5, 6])
def test_exactness_and_delta_quasi_iso(a, width):
    m = build_model(SYMP, a, a + width)
    assert exactness_certificate(m)["exact"]
    assert is_quasi_iso(integral_map(m))
    for t in m.sites:
        assert is_quasi_iso(delta_map(m, t))


@pytest.mark.parametrize("a,b", [(0, 1), (3, 4), (F(1, 10), F(9, 10))])
def test_no_sites_breaks_exactness(a, b):
    m = build_model(SYMP, a, b)
    cert = exactness_certificate(m)
    assert not cert["exact"] and not cert["surjective"]


def test_exactness_fractional_endpoints():
    m = build_model(LINE, F(1, 2), F(3, 2))
    assert m.sites == [1]
    assert exactness_certificate(m)["exact"]


def test_deltas_agree_on_cohomology():
    # delta_s - delta_t is null-homotopic, so the induced maps agree
    m = build_model(SYMP, -2, 3)
    h = cohomology(m.complex(), 0)
    for s, t in itertools.combinations(m.sites, 2):
        for i in range(2):
            e = [int(i == j) for j in range(2)]
            assert h.coordinates(delta(m, s, e).x) == h.coordinates(delta(m, t, e).x)


def test_structure_map_examples():
    target = build_model(SYMP, -1, 2)
    left = build_model(SYMP, -1, HALF)
    right = build_model(SYMP, HALF, 2)
    v, w = (1, 2), (3, -1)
    got = structure_map([delta(left, 0, v), delta(right, 1, w)], target)
    assert got == delta(target, 0, v) + delta(target, 1, w)
    # unary structure map is plain extension
    assert structure_map([delta(left, 0, v)], target) == extend(delta(left, 0, v), target)


def test_structure_map_errors():
    target = build_model(SYMP, -1, 2)
    a = build_model(SYMP, -1, 1)
    b = build_model(SYMP, 0, 2)
    with pytest.raises(ModelError):
        structure_map([delta(a, 0, (1, 0)), delta(b, 1, (1, 0))], target)
    small = build_model(SYMP, F(1, 10), F(11, 10))
    with pytest.raises(ModelError):
        structure_map([delta(small, 1, (1, 0))], target)
    with pytest.raises(ModelError):
        structure_map([delta(target, 0, (1, 0))], a)


def test_extension_commutes_with_q():
    src = build_model(SYMP, -1, 2)
    tgt = build_model(SYMP, -3, 5)
    f = extension_map(src, tgt)
    assert tgt.Q @ f.at(-1) == f.at(0) @ src.Q


def test_structure_map_symmetric_and_associative():
    V = SYMP
    pieces = [build_model(V, -4, -1), build_model(V, -1, 1), build_model(V, 1, 4)]
    mid = build_model(V, -4, 1)
    top = build_model(V, -4, 4)
    rng = random.Random(0)
    elems = [p.element(x=[rng.randint(-3, 3) for _ in p.labels0], y=[rng.randint(-3, 3) for _ in p.labels1]) for p in pieces]
    flat = structure_map(elems, top)
    assert structure_map(elems[::-1], top) == flat
    inner = structure_map(elems[:2], mid)
    assert structure_map([inner, elems[2]], top) == flat


@pytest.mark.parametrize(
    "src,tgt,expected",
    [
        ((-1, 2), (-2, 3), True),
        ((-1, 2), (-1, 2), True),
        ((F(1, 10), F(9, 10)), (-1, 2), False),
        ((F(-1, 2), F(1, 2)), (-5, 5), True),
    ],
)
def test_local_constancy(src, tgt, expected):
    assert local_constancy_check(build_model(SYMP, *src), build_model(SYMP, *tgt)) is expected


def test_local_constancy_non_inclusion():
    with pytest.raises(ModelError):
        local_constancy_check(build_model(SYMP, -2, 3), build_model(SYMP, -1, 2))


def test_cone_of_q_matches_model():
    # the model is itself the cone of Q viewed as a map of degree 0 complexes
    from discquant.homalg import Complex, GradedModule

    m = build_model(SYMP, -1, 3)
    src = Complex(GradedModule({0: m.labels1}), {})
    tgt = Complex(GradedModule({0: m.labels0}), {})
    c = cone(ChainMap(src, tgt, {0: m.Q}))
    assert cohomology(c, 0).rank == 2 and cohomology(c, -1).is_zero
