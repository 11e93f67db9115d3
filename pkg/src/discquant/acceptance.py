"""The acceptance suite: ten end-to-end checks with pass/fail and witnesses.

Each check takes a seed and a ``quick`` flag and returns a
:class:`CheckResult`.  Witness data is JSON-ready (rationals as strings).
Wall time (integer milliseconds) is recorded separately so reports stay byte-reproducible.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction

from .discrete_model import (
    PairedSpace,
    build_model,
    delta_map,
    exactness_certificate,
    extension_map,
    integral_map,
)
from .exact_linalg import format_rational
from .geometry import (
    check_lower_bound,
    fits_1d,
    inflate,
    inflation_homotopy,
    inside_unit_ball,
    lower_bound,
    shrink_into_unit,
)
from .homalg import is_quasi_iso
from .operads import OperadKind, compose, gamma, identity, is_color, lattice_image
from .oracles import count_monomials, fits_1d_search
from .quantize import (
    SymTruncation,
    bd_differential,
    bracket_from_commutator,
    classical_limit,
    h0,
    leibniz_defect,
    phi_certificate,
    poisson_bracket,
    verify_commutator,
)
from .sampling import (
    random_configuration,
    random_eps,
    random_lower_bound_instance,
    random_operation,
    random_pairing,
)

__all__ = ["CheckResult", "CHECKS", "run_check", "run_all"]

SYMP = PairedSpace.symplectic()


@dataclass
class CheckResult:
    name: str
    passed: bool
    witness: dict = field(default_factory=dict)
    millis: int = 0
    quick: bool = False

    @property
    def status(self) -> str:
        return "pass" if self.passed else "fail"

    def to_json(self, timings: bool = False) -> dict:
        out = {"name": self.name, "status": self.status, "witness": self.witness}
        if self.quick:
            out["quick"] = True
        if timings:
            out["millis"] = self.millis
        return out


def _rng(seed: int, k: int) -> random.Random:
    return random.Random(seed * 1000 + k)


def _q(x) -> str:
    return format_rational(Fraction(x))


# 1 ------------------------------------------------------------------------


def weyl_commutation(seed: int = 0, quick: bool = False) -> CheckResult:
    start = time.perf_counter_ns()
    H = h0(SymTruncation(build_model(SYMP, -1, 2), 2 if quick else 3))
    got = verify_commutator((1, 0), (0, 1), H)
    elapsed_ns = time.perf_counter_ns() - start
    ok = got.coeff(0) == 0 and got.coeff(1) == 1 and got.degree == 1
    # the time budget is part of the check but kept out of the witness
    return CheckResult("c01_weyl_commutation", ok and elapsed_ns < 5 * 10**9, {"commutator": {"[v,w]": str(got)}, "N": H.trunc.N}, quick=quick)


# 2 ------------------------------------------------------------------------


def weyl_isomorphism(seed: int = 0, quick: bool = False) -> CheckResult:
    rows = []
    ok = True
    for N in (1, 2) if quick else (1, 2, 3):
        H = h0(SymTruncation(build_model(SYMP, -1, 2), N))
        cert = phi_certificate(H)
        expected = (N + 1) * (N + 2) // 2
        oracle = count_monomials(2, N)
        good = (
            H.result.is_free
            and H.rank == expected == oracle
            and cert["unimodular"]
            and cert["rank"] == expected
            and cert["identity_mod_h"]
        )
        ok &= good
        rows.append({"N": N, "rank": H.rank, "oracle": oracle, "free": H.result.is_free, **cert})
    return CheckResult("c02_weyl_isomorphism", ok, {"truncations": rows}, quick=quick)


# 3 ------------------------------------------------------------------------


def _bd_failures(s: SymTruncation) -> list[str]:
    bad = [f"d^2 on {s.label(m)}" for m in bd_differential(s, check=False).square_defects()]
    monos = [m for ms in s.basis.values() for m in ms]
    for f, g in itertools.product(monos, repeat=2):
        if sum(f) + sum(g) > s.N:
            continue
        F1, G1 = {f: Fraction(1)}, {g: Fraction(1)}
        # the h^0 part: d_Q is a derivation; the h^1 part: Delta's defect is the bracket
        if leibniz_defect(s, F1, G1, s.d_q) or leibniz_defect(s, F1, G1, s.laplacian) != poisson_bracket(s, F1, G1):
            bad.append(f"Leibniz on ({s.label(f)}, {s.label(g)})")
    return bad


def bd_identities(seed: int = 0, quick: bool = False) -> CheckResult:
    rng = _rng(seed, 3)
    failures = []
    cases = []
    for k in range(50):
        d = rng.randint(1, 3)
        N = rng.randint(2, 2 if quick else 4)
        c = random_pairing(rng, d)
        s = SymTruncation(build_model(PairedSpace(d, c), -1, 2), N)
        bad = _bd_failures(s)
        cases.append((d, N))
        if bad:
            failures.append({"case": k, "d": d, "N": N, "pairing": [[_q(x) for x in r] for r in c], "first": bad[:3]})
    witness = {"cases": len(cases), "max_d": max(d for d, _ in cases), "max_N": max(N for _, N in cases), "failures": failures}
    return CheckResult("c03_bd_identities", not failures, witness, quick=quick)


# 4 ------------------------------------------------------------------------


def _model_report(a: int, b: int) -> tuple[bool, dict]:
    m = build_model(SYMP, a, b)
    cert = exactness_certificate(m)
    deltas = all(is_quasi_iso(delta_map(m, t)) for t in m.sites)
    integral_ok = is_quasi_iso(integral_map(m))
    ok = cert["exact"] and deltas and integral_ok
    return ok, {"interval": [a, b], "sites": m.sites, **cert, "deltas_quasi_iso": deltas}


def de_rham_exactness(seed: int = 0, quick: bool = False, widths=range(1, 7), starts=range(-3, 4)) -> CheckResult:
    """Exactness, delta quasi-isomorphisms and local constancy over all
    integer intervals in the window.

    Intervals of width 1 have no sites, so they fail: this is reported, not
    hidden.
    """
    intervals = [(a, a + w) for a in starts for w in widths]
    failures = []
    for a, b in intervals:
        ok, rep = _model_report(a, b)
        if not ok:
            failures.append(rep)
    bad_inclusions = []
    n_inc = 0
    for (a1, b1), (a2, b2) in itertools.permutations(intervals, 2):
        if a2 <= a1 and b1 <= b2:
            n_inc += 1
            f = extension_map(build_model(SYMP, a1, b1), build_model(SYMP, a2, b2))
            if not is_quasi_iso(f):
                bad_inclusions.append([[a1, b1], [a2, b2]])
    witness = {
        "intervals": len(intervals),
        "inclusions": n_inc,
        "failing_intervals": failures[:5],
        "failing_interval_count": len(failures),
        "failing_inclusions": bad_inclusions[:5],
        "failing_inclusion_count": len(bad_inclusions),
    }
    return CheckResult("c04_de_rham_exactness", not failures and not bad_inclusions, witness)


# 5 ------------------------------------------------------------------------


def _random_tree(rng, kind):
    target = kind.ball(tuple(Fraction(rng.randint(-5, 5)) for _ in range(kind.n)), Fraction(rng.randint(24, 60), 4))
    top = random_operation(rng, kind, target)
    if top is None:
        return None
    mids = [random_operation(rng, kind, s) or identity(s, kind) for s in top.sources]
    lows = [[random_operation(rng, kind, s) or identity(s, kind) for s in m.sources] for m in mids]
    return top, mids, lows


def operad_laws(seed: int = 0, quick: bool = False, count: int = 100) -> CheckResult:
    rng = _rng(seed, 5)
    kind = OperadKind("open_disc", 1, Fraction(1, 2))
    failures = []
    done = draws = 0
    while done < count:
        draws += 1
        tree = _random_tree(rng, kind)
        if tree is None:
            continue
        done += 1
        top, mids, lows = tree
        flat = [x for row in lows for x in row]
        checks = {
            "associativity": compose(compose(top, mids), flat) == compose(top, [compose(m, row) for m, row in zip(mids, lows)]),
            "right_unit": compose(top, [identity(s, kind) for s in top.sources]) == top,
            "left_unit": compose(identity(top.target, kind), [top]) == top,
            "gamma": gamma(compose(top, mids)) == gamma(top).compose([gamma(m) for m in mids]),
        }
        bad = [k for k, v in checks.items() if not v]
        if bad:
            failures.append({"sample": done, "laws": bad, "top": top.to_json()})
    return CheckResult("c05_operad_laws", not failures, {"samples": done, "draws": draws, "failures": failures[:3]})


# 6 ------------------------------------------------------------------------


def inflation_shrinking(seed: int = 0, quick: bool = False, count: int = 100) -> CheckResult:
    rng = _rng(seed, 6)
    failures = []
    ts = [Fraction(0), Fraction(1, 4), Fraction(1, 2), Fraction(3, 4), Fraction(1)]
    for k in range(count):
        c, R = random_configuration(rng)
        eps = random_eps(rng)
        problems = []
        out = inflate(c, R)
        if not all(r > R for r in out.radii) or not out.is_valid(R):
            problems.append("inflate")
        for t in ts:
            if not inflation_homotopy(c, t, R).is_valid(0):
                problems.append(f"homotopy at t={_q(t)}")
        if not all(inside_unit_ball(b) for b in shrink_into_unit(c, eps).balls):
            problems.append("shrink")
        if problems:
            failures.append({"sample": k, "R": _q(R), "problems": problems, "configuration": c.to_json()})
    return CheckResult("c06_inflation_shrinking", not failures, {"samples": count, "failures": failures[:3]})


# 7 ------------------------------------------------------------------------


def lower_bound_algorithm(seed: int = 0, quick: bool = False, count: int = 100) -> CheckResult:
    rng = _rng(seed, 7)
    failures = []
    for k in range(count):
        n = 1 if k % 2 == 0 else 2
        nc, U, V, R = random_lower_bound_instance(rng, n, "inf")
        try:
            W = lower_bound(nc, U, V, R)
            bad = [str(v) for v in check_lower_bound(nc, U, V, W)]
        except ValueError as e:
            bad = [f"error: {e}"]
        if bad:
            failures.append({"sample": k, "n": n, "violations": bad[:3], "nested": nc.to_json()})
    return CheckResult("c07_lower_bound", not failures, {"samples": count, "failures": failures[:3]})


# 8 ------------------------------------------------------------------------


def packing(seed: int = 0, quick: bool = False) -> CheckResult:
    mismatches = []
    grid = [Fraction(k, 8) for k in range(1, 65)]
    n = 0
    for m in (1, 2, 3):
        for R in (Fraction(1, 2), Fraction(1), Fraction(2)):
            for rho in grid:
                n += 1
                fast = fits_1d(m, R, rho)
                slow = fits_1d_search(m, R, rho) is not None
                if fast != slow:
                    mismatches.append({"m": m, "R": _q(R), "rho": _q(rho), "formula": fast, "search": slow})
    special = fits_1d(2, 1, Fraction(3, 2))
    witness = {"cases": n, "mismatches": mismatches[:5], "m=2,R=1,rho=3/2": special}
    return CheckResult("c08_packing", not mismatches and not special, witness)


# 9 ------------------------------------------------------------------------


def lattice_bridge(seed: int = 0, quick: bool = False, count: int = 100) -> CheckResult:
    rng = _rng(seed, 9)
    kind = OperadKind("closed_cube", 2, 2)
    lattice = OperadKind("lattice", 2)
    failures = []
    done = draws = 0
    while done < count:
        draws += 1
        target = kind.ball((Fraction(rng.randint(-12, 12), 4), Fraction(rng.randint(-12, 12), 4)), Fraction(rng.randint(40, 120), 8))
        m = random_operation(rng, kind, target)
        if m is None:
            continue
        done += 1
        try:
            img = lattice_image(m)
            ok = all(is_color(s, lattice) for s in img.sources) and all(min(s.sides) >= 2 for s in img.sources)
        except ValueError as e:
            ok, img = False, str(e)
        if not ok:
            failures.append({"sample": done, "operation": m.to_json()})
    return CheckResult("c09_lattice_bridge", not failures, {"samples": done, "draws": draws, "failures": failures[:3]})


# 10 -----------------------------------------------------------------------


def classical_limit_check(seed: int = 0, quick: bool = False) -> CheckResult:
    H = h0(SymTruncation(build_model(SYMP, -1, 2), 2 if quick else 3))
    noncomm = []
    for i, j in itertools.product(range(H.rank), repeat=2):
        a, b = H.basis_class(i), H.basis_class(j)
        if a.length + b.length <= H.trunc.N and classical_limit(a * b) != classical_limit(b * a):
            noncomm.append([H.names[i], H.names[j]])
    rng = _rng(seed, 10)
    mismatches = []
    for k in range(20):
        d = rng.randint(2, 3)
        c = random_pairing(rng, d)
        v = [rng.randint(-3, 3) for _ in range(d)]
        w = [rng.randint(-3, 3) for _ in range(d)]
        Hk = h0(SymTruncation(build_model(PairedSpace(d, c), -1, 2), 2))
        got = bracket_from_commutator(verify_commutator(v, w, Hk))
        want = sum((v[i] * c[i][j] * w[j] for i in range(d) for j in range(d)), Fraction(0))
        if got != want:
            mismatches.append({"sample": k, "got": _q(got), "want": _q(want)})
    witness = {"basis_pairs_noncommuting": noncomm[:5], "pairings": 20, "bracket_mismatches": mismatches[:5]}
    return CheckResult("c10_classical_limit", not noncomm and not mismatches, witness, quick=quick)


CHECKS = {
    1: weyl_commutation,
    2: weyl_isomorphism,
    3: bd_identities,
    4: de_rham_exactness,
    5: operad_laws,
    6: inflation_shrinking,
    7: lower_bound_algorithm,
    8: packing,
    9: lattice_bridge,
    10: classical_limit_check,
}


def run_check(k: int, seed: int = 0, quick: bool = False) -> CheckResult:
    start = time.perf_counter_ns()
    res = CHECKS[k](seed=seed, quick=quick)
    res.millis = (time.perf_counter_ns() - start) // 10**6
    return res


def run_all(seed: int = 0, quick: bool = False) -> list[CheckResult]:
    return sorted((run_check(k, seed, quick) for k in CHECKS), key=lambda r: r.name)
