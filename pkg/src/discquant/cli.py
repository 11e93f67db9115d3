"""Command line front end.

    discquant run SCENARIO.json [--out PATH] [--seed N] [--quick] [--timings]
    discquant acceptance [--out PATH] [--seed N] [--quick] [--timings]
    discquant --json-schema

Exit codes: 0 when every check passes, 1 when some check fails or errors,
2 on unreadable or schema-invalid input.
"""

from __future__ import annotations

import argparse
import itertools
import json
import sys
import time
from fractions import Fraction
from typing import Callable

import jsonschema

from . import __version__
from .acceptance import CHECKS, run_check
from .discrete_model import (
    PairedSpace,
    build_model,
    delta_map,
    exactness_certificate,
    integral_map,
    local_constancy_check,
)
from .exact_linalg import HPoly, as_rational, format_rational
from .geometry import (
    Ball,
    Configuration,
    inflate,
    inflation_homotopy,
    inside_unit_ball,
    shrink_into_unit,
)
from .homalg import is_quasi_iso
from .operads import (
    InvalidColor,
    Multimorphism,
    color_from_json,
    gamma,
    is_color,
    kind_from_json,
    lattice_image,
    validity_certificate,
)
from .oracles import count_monomials
from .quantize import (
    QuantizationError,
    SymTruncation,
    bd_differential,
    expected_commutator,
    h0,
    leibniz_defect,
    phi_certificate,
    poisson_bracket,
    verify_commutator,
)

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2
U64 = 2**64

# --- schemas ----------------------------------------------------------------

RATIONAL = {
    "oneOf": [
        {"type": "integer"},
        {"type": "string", "pattern": r"^\s*-?\d+(\s*/\s*\d+)?\s*$"},
    ]
}
POINT = {"type": "array", "items": RATIONAL}
BALL = {
    "type": "object",
    "required": ["center", "radius"],
    "properties": {
        "center": POINT,
        "radius": RATIONAL,
        "norm": {"enum": ["euclid", "inf"]},
        "boundary": {"enum": ["open", "closed"]},
    },
    "additionalProperties": False,
}
RECTANGLE = {"type": "array", "items": {"type": "array", "items": {"type": "integer"}, "minItems": 2, "maxItems": 2}}
COLOR = {"oneOf": [BALL, RECTANGLE]}
PAIRED_SPACE = {
    "type": "object",
    "required": ["dim"],
    "properties": {
        "dim": {"type": "integer", "minimum": 0},
        "pairing": {"type": "array", "items": {"type": "array", "items": RATIONAL}},
        "names": {"type": "array", "items": {"type": "string"}},
    },
    "additionalProperties": False,
}
INTERVAL = {"type": "array", "items": RATIONAL, "minItems": 2, "maxItems": 2}
OPERAD_KIND = {
    "type": "object",
    "required": ["flavor", "n"],
    "properties": {
        "flavor": {
            "enum": [
                "open_disc",
                "closed_disc",
                "open_cube",
                "closed_cube",
                "lattice",
                "stratified_linear",
                "stratified_corner",
            ]
        },
        "n": {"oneOf": [{"type": "integer", "minimum": 1}, {"type": "array", "items": {"type": "integer", "minimum": 0}, "minItems": 2, "maxItems": 2}]},
        "R": RATIONAL,
        "boundary": {"enum": ["open", "closed"]},
        "strata": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "basis": {"type": "array", "items": POINT},
                    "side_functional": {"oneOf": [POINT, {"type": "null"}]},
                },
                "additionalProperties": False,
            },
        },
    },
    "additionalProperties": False,
}

KIND_SCHEMAS = {
    "operad": {
        "type": "object",
        "required": ["kind", "operad", "sources", "target"],
        "properties": {
            "kind": {"const": "operad"},
            "operad": OPERAD_KIND,
            "sources": {"type": "array", "items": COLOR},
            "target": COLOR,
        },
        "additionalProperties": False,
    },
    "geometry": {
        "type": "object",
        "required": ["kind", "R", "balls"],
        "properties": {
            "kind": {"const": "geometry"},
            "R": RATIONAL,
            "balls": {"type": "array", "items": BALL},
            "eps": RATIONAL,
            "shrink_eps": RATIONAL,
        },
        "additionalProperties": False,
    },
    "model": {
        "type": "object",
        "required": ["kind", "V", "interval"],
        "properties": {
            "kind": {"const": "model"},
            "V": PAIRED_SPACE,
            "interval": INTERVAL,
            "subintervals": {"type": "array", "items": INTERVAL},
        },
        "additionalProperties": False,
    },
    "quantize": {
        "type": "object",
        "required": ["kind", "V", "N"],
        "properties": {
            "kind": {"const": "quantize"},
            "V": PAIRED_SPACE,
            "interval": INTERVAL,
            "N": {"type": "integer", "minimum": 0, "maximum": 6},
        },
        "additionalProperties": False,
    },
    "acceptance": {
        "type": "object",
        "required": ["kind"],
        "properties": {
            "kind": {"const": "acceptance"},
            "quick": {"type": "boolean"},
            "criteria": {"type": "array", "items": {"type": "integer", "minimum": 1, "maximum": 10}, "uniqueItems": True},
        },
        "additionalProperties": False,
    },
}

SCENARIO_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "scenario",
    "type": "object",
    "required": ["kind"],
    "properties": {"kind": {"enum": sorted(KIND_SCHEMAS)}},
}

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "report",
    "type": "object",
    "required": ["tool", "version", "seed", "scenario", "quick", "status", "checks"],
    "properties": {
        "tool": {"const": "discquant"},
        "version": {"type": "string"},
        "seed": {"type": "integer", "minimum": 0},
        "scenario": {"enum": sorted(KIND_SCHEMAS)},
        "quick": {"type": "boolean"},
        "status": {"enum": ["pass", "fail"]},
        "millis": {"type": "integer", "minimum": 0},
        "checks": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "status", "witness"],
                "properties": {
                    "name": {"type": "string"},
                    "status": {"enum": ["pass", "fail", "error"]},
                    "witness": {"type": "object"},
                    "quick": {"type": "boolean"},
                    "millis": {"type": "integer", "minimum": 0},
                },
            },
        },
    },
}


def all_schemas() -> dict:
    return {"scenario": SCENARIO_SCHEMA, "kinds": KIND_SCHEMAS, "report": REPORT_SCHEMA}


class InputError(Exception):
    pass


def validate_scenario(data) -> None:
    try:
        jsonschema.validate(data, SCENARIO_SCHEMA)
        jsonschema.validate(data, KIND_SCHEMAS[data["kind"]])
    except jsonschema.ValidationError as e:
        where = "/".join(str(p) for p in e.absolute_path) or "<root>"
        raise InputError(f"schema error at {where}: {e.message}") from None


# --- checks -----------------------------------------------------------------


def _check(name: str, passed: bool, witness: dict | None = None) -> dict:
    return {"name": name, "status": "pass" if passed else "fail", "witness": witness or {}}


def _hbar(p: HPoly) -> str:
    return str(p).replace("h", "ħ")


def _paired_space(data: dict) -> tuple[PairedSpace, list[str]]:
    V = PairedSpace.from_json(data)
    names = data.get("names")
    if names is None:
        names = ["v", "w"] if V.dim == 2 else [f"e{i}" for i in range(V.dim)]
    if len(names) != V.dim:
        raise InputError("names must list one name per basis vector")
    return V, names


def _interval(data) -> tuple[Fraction, Fraction]:
    a, b = (as_rational(x) for x in data)
    if a >= b:
        raise InputError(f"interval needs a < b, got [{format_rational(a)}, {format_rational(b)}]")
    return a, b


def run_operad(data: dict, ctx: dict) -> list[dict]:
    kind = kind_from_json(data["operad"])
    sources = [color_from_json(s, kind) for s in data["sources"]]
    target = color_from_json(data["target"], kind)
    bad = []
    for label, c in [*enumerate(sources), ("target", target)]:
        if not is_color(c, kind):
            bad.append({"which": label, "color": c.to_json(), "R": format_rational(kind.R)})
    checks = [_check("colors", not bad, {"not_colors": bad})]
    if bad:
        checks.append({"name": "multimorphism", "status": "error", "witness": {"reason": "some inputs are not colors"}})
        return checks
    cert = validity_certificate(sources, target, kind)
    checks.append(_check("multimorphism", all(cert.values()), {"certificate": cert}))
    if all(cert.values()) and kind.flavor != "lattice" and not kind.stratified:
        op = gamma(Multimorphism(kind, tuple(sources), target, cert))
        checks.append(_check("little_disc_image", op.is_valid(), {"operation": op.to_json()}))
        if kind.flavor == "closed_cube" and kind.R > Fraction(3, 2):
            img = lattice_image(Multimorphism(kind, tuple(sources), target, cert))
            sides_ok = all(min(s.sides) >= 2 for s in img.sources)
            checks.append(_check("lattice_image", sides_ok, {"sources": [x.to_json() for x in img.sources], "target": img.target.to_json()}))
    return checks


def run_geometry(data: dict, ctx: dict) -> list[dict]:
    """Checks on a tuple of closed balls: disjointness, radii above R, and
    the inflation and shrinking constructions."""
    R = as_rational(data["R"])
    balls = tuple(Ball.from_json(b).as_closed() for b in data["balls"])
    conf = Configuration(balls, 0)
    overlaps = conf.violations(0)
    small = [
        {"ball": i, "radius": format_rational(b.radius), "R": format_rational(R)}
        for i, b in enumerate(balls)
        if b.radius <= R
    ]
    checks = [
        _check("disjoint", not overlaps, {"violations": overlaps}),
        _check("radii_above_R", not small, {"too_small": small}),
    ]
    if not balls:
        return checks
    if overlaps:
        reason = {"reason": "the balls are not disjoint"}
        checks += [{"name": n, "status": "error", "witness": reason} for n in ("inflate", "inflation_homotopy")]
    else:
        eps = as_rational(data["eps"]) if "eps" in data else None
        out = inflate(conf, R, eps)
        checks.append(_check("inflate", out.is_valid(R), {"radii": [format_rational(r) for r in out.radii]}))
        bad_t = []
        for t in (0, Fraction(1, 4), Fraction(1, 2), Fraction(3, 4), 1):
            if not inflation_homotopy(conf, t, R, eps).is_valid(0):
                bad_t.append(format_rational(t))
        checks.append(_check("inflation_homotopy", not bad_t, {"failing_t": bad_t}))
    shrunk = shrink_into_unit(conf, as_rational(data.get("shrink_eps", 1)))
    outside = [i for i, b in enumerate(shrunk.balls) if not inside_unit_ball(b)]
    checks.append(_check("shrink_into_unit", not outside, {"outside": outside}))
    return checks


def run_model(data: dict, ctx: dict) -> list[dict]:
    V, _ = _paired_space(data["V"])
    a, b = _interval(data["interval"])
    m = build_model(V, a, b)
    cert = exactness_certificate(m)
    checks = [
        _check("exactness", cert["exact"], {**cert, "sites": m.sites}),
        _check("integral_quasi_iso", is_quasi_iso(integral_map(m))),
        _check("delta_quasi_iso", all(is_quasi_iso(delta_map(m, t)) for t in m.sites), {"sites": m.sites}),
    ]
    for sub in data.get("subintervals", []):
        sa, sb = _interval(sub)
        src = build_model(V, sa, sb)
        if not m.contains(src):
            raise InputError(f"subinterval [{format_rational(sa)}, {format_rational(sb)}] is not inside the interval")
        name = f"local_constancy[{format_rational(sa)},{format_rational(sb)}]"
        checks.append(_check(name, local_constancy_check(src, m)))
    return checks


def run_quantize(data: dict, ctx: dict) -> list[dict]:
    V, names = _paired_space(data["V"])
    a, b = _interval(data.get("interval", [-1, 2]))
    N = data["N"]
    if ctx["quick"]:
        N = min(N, 2)
    s = SymTruncation(build_model(V, a, b), N)
    bd = bd_differential(s, check=False)
    defects = bd.square_defects()
    checks = [_check("d_squared", not defects, {"failing": [s.label(m) for m in defects[:5]]})]
    monos = [m for ms in s.basis.values() for m in ms]
    bad = []
    for f, g in itertools.product(monos, repeat=2):
        if sum(f) + sum(g) > N:
            continue
        F1, G1 = {f: Fraction(1)}, {g: Fraction(1)}
        if leibniz_defect(s, F1, G1, s.d_q) or leibniz_defect(s, F1, G1, s.laplacian) != poisson_bracket(s, F1, G1):
            bad.append([s.label(f), s.label(g)])
    checks.append(_check("leibniz", not bad, {"failing": bad[:5]}))
    try:
        H = h0(s)
    except QuantizationError as e:
        checks.append({"name": "h0", "status": "error", "witness": {"reason": str(e)}})
        return checks
    oracle = count_monomials(V.dim, N)
    checks.append(_check("h0", H.result.is_free and H.rank == oracle, {**H.to_json(), "oracle_rank": oracle}))
    cert = phi_certificate(H)
    checks.append(_check("phi", cert["unimodular"] and cert["identity_mod_h"], cert))
    if N >= 2:
        table, wrong = {}, []
        for i, j in itertools.combinations(range(V.dim), 2):
            e_i = [int(k == i) for k in range(V.dim)]
            e_j = [int(k == j) for k in range(V.dim)]
            key = f"[{names[i]},{names[j]}]"
            try:
                got = verify_commutator(e_i, e_j, H)
            except QuantizationError as e:
                table[key] = f"error: {e}"
                wrong.append(key)
                continue
            table[key] = _hbar(got)
            if got != expected_commutator(e_i, e_j, V.c):
                wrong.append(key)
        checks.append(_check("commutators", not wrong, {"table": table, "mismatches": wrong}))
    return checks


def run_acceptance_scenario(data: dict, ctx: dict) -> list[dict]:
    quick = ctx["quick"] or data.get("quick", False)
    ctx["quick"] = quick
    out = []
    for k in sorted(data.get("criteria", CHECKS)):
        res = run_check(k, seed=ctx["seed"], quick=quick)
        out.append(res.to_json(ctx["timings"]))
    return out


RUNNERS: dict[str, Callable] = {
    "operad": run_operad,
    "geometry": run_geometry,
    "model": run_model,
    "quantize": run_quantize,
    "acceptance": run_acceptance_scenario,
}


# --- driver -----------------------------------------------------------------


def build_report(data: dict, seed: int = 0, quick: bool = False, timings: bool = False) -> dict:
    validate_scenario(data)
    ctx = {"seed": seed, "quick": quick, "timings": timings}
    start = time.perf_counter_ns()
    try:
        checks = RUNNERS[data["kind"]](data, ctx)
    except (ValueError, TypeError, InvalidColor, ZeroDivisionError) as e:
        # malformed values that the schema cannot see: bad pairings, floats, mismatched dimensions
        raise InputError(f"invalid scenario: {e}") from None
    checks.sort(key=lambda c: c["name"])
    report = {
        "tool": "discquant",
        "version": __version__,
        "seed": seed,
        "scenario": data["kind"],
        "quick": ctx["quick"],
        "status": "pass" if all(c["status"] == "pass" for c in checks) else "fail",
        "checks": checks,
    }
    if timings:
        report["millis"] = (time.perf_counter_ns() - start) // 10**6
    return report


def load_scenario(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh, parse_float=_refuse_float)
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise InputError(f"malformed JSON in {path}: {e}") from None


def _refuse_float(s: str):
    raise InputError(f"floating point literal {s!r}; write rationals as \"p/q\" strings")


def dump_report(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _write_stdout(text: str):
    buf = getattr(sys.stdout, "buffer", None)
    if buf is None:
        sys.stdout.write(text)
    else:
        sys.stdout.flush()
        buf.write(text.encode("utf-8"))
        buf.flush()


def _seed(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be an integer, got {text!r}") from None
    if not 0 <= v < U64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return v


def make_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", metavar="PATH", help="write the report here instead of stdout")
    common.add_argument("--seed", type=_seed, default=0, help="seed for randomized suites (default 0)")
    common.add_argument("--quick", action="store_true", help="cap truncation orders at N = 2")
    common.add_argument("--timings", action="store_true", help="include wall times (makes reports non-reproducible)")
    p = argparse.ArgumentParser(prog="discquant", description=__doc__.split("\n\n")[0])
    p.add_argument("--json-schema", action="store_true", help="print the scenario and report schemas and exit")
    p.add_argument("--version", action="version", version=f"discquant {__version__}")
    sub = p.add_subparsers(dest="command")
    run = sub.add_parser("run", parents=[common], help="run the checks of one scenario file")
    run.add_argument("scenario")
    sub.add_parser("acceptance", parents=[common], help="run the acceptance suite")
    return p


def main(argv: list[str] | None = None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    if args.json_schema:
        sys.stdout.write(json.dumps(all_schemas(), indent=2, sort_keys=True) + "\n")
        return EXIT_OK
    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_INPUT
    try:
        if args.command == "run":
            data = load_scenario(args.scenario)
        else:
            data = {"kind": "acceptance"}
        report = build_report(data, args.seed, args.quick, args.timings)
    except InputError as e:
        print(f"discquant: {e}", file=sys.stderr)
        return EXIT_INPUT
    text = dump_report(report)
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as e:
            print(f"discquant: cannot write {args.out}: {e.strerror}", file=sys.stderr)
            return EXIT_INPUT
    else:
        _write_stdout(text)
    return EXIT_OK if report["status"] == "pass" else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
