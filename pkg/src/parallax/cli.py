"""Command-line front end.

Exit codes: 0 when every requested check holds (or a classification was
produced), 1 when a check fails (the report carries a witness), 2 for bad
input: schema violations, malformed expressions, undecidable flags.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field

from . import __version__
from . import manifest as mf
from .connection import (associated_connection, lie_connection_report, opposite_initial_brackets,
                         reciprocal, to_coordinates, verify_horizontal)
from .corpus import get_example, list_examples
from .errors import (ChartMismatch, ExprSyntaxError, NameClash, NonIntegrable, ParallaxError,
                     SchemaError, TowerInsufficient, Undecidable, UnknownSymbol)
from .parallelism import (Coframe, coframe, conjugating_map, infer_structure_constants,
                          maurer_cartan_residual, verify_isogeny_pullback)

INPUT_ERRORS = (SchemaError, ExprSyntaxError, UnknownSymbol, NameClash, NonIntegrable,
                TowerInsufficient, ChartMismatch, Undecidable)


@dataclass
class Check:
    name: str
    ok: bool
    data: dict = field(default_factory=dict)
    summary: str = ""

    def to_json(self):
        return {"name": self.name, "ok": self.ok, "data": self.data}


# ---------------------------------------------------------------------------
# individual checks
# ---------------------------------------------------------------------------

def _entries(C):
    return [{"i": i + 1, "j": j + 1, "k": k + 1, "value": str(v)}
            for (i, j, k), v in sorted(C.nonzero().items())]


def _same_entries(P, C, expected, pointer):
    want = {}
    for n, e in enumerate(expected):
        want[(e["i"] - 1, e["j"] - 1, e["k"] - 1)] = P.expr(e["value"], f"{pointer}/{n}/value", C.chart)
    got = C.nonzero()
    return set(want) == set(got) and all(want[key] == got[key] for key in want)


def check_structure(P) -> Check:
    F = P.frame()
    lam = infer_structure_constants(F)
    data = {"structure_constants": lam.to_json(), "determinant": str(F.det()),
            "singular_locus": F.singular_locus()}
    expected = P.algebra()
    ok = True
    if expected is not None:
        ok = expected == lam
        data["expected"] = expected.to_json()
    pretty = "; ".join(f"[A{i+1},A{j+1}] = " + " + ".join(f"({v})*A{k+1}" for k, v in row.items())
                       for (i, j), row in lam.nonzero_brackets().items()) or "abelian"
    return Check("structure-constants", ok, data, pretty)


def _coframe(P):
    if P.kind == "coparallelism":
        algebra = P.algebra()
        if algebra is None:
            raise SchemaError("a coparallelism manifest needs 'algebra'", pointer="/algebra")
        return Coframe(P.base, algebra, P.coframe_matrix())
    return coframe(P.frame())


def check_coframe(P) -> Check:
    omega = _coframe(P)
    data = {"coframe": omega.to_json(), "text": omega.describe()}
    ok = True
    exp = P.data.get("expect", {}).get("coframe")
    if exp is not None:
        want = [[P.expr(v, f"/expect/coframe/{i}/{a}", P.base) for a, v in enumerate(r)]
                for i, r in enumerate(exp)]
        ok = want == omega.matrix
    return Check("coframe", ok, data, omega.describe())


def check_maurer_cartan(P) -> Check:
    omega = _coframe(P)
    res = maurer_cartan_residual(omega)
    wit = [{"component": idx[0] + 1, "pair": [idx[1] + 1, idx[2] + 1], "value": str(v)}
           for idx, v in res.nonzero()]
    return Check("maurer-cartan", res.is_zero(), {"residual_nonzero": wit},
                 "d omega + 1/2 [omega, omega] = 0" if res.is_zero() else f"{len(wit)} nonzero entries")


def check_reciprocal(P, frame_choice="coordinate") -> Check:
    R = reciprocal(associated_connection(P.frame()))
    if frame_choice == "coordinate":
        R = to_coordinates(R)
    entries = _entries(R)
    key = "reciprocal_coordinates" if frame_choice == "coordinate" else "reciprocal_parallelism"
    exp = P.data.get("expect", {}).get(key)
    ok = True if exp is None else _same_entries(P, R, exp, f"/expect/{key}")
    text = ", ".join(f"G{e['i']}{e['j']}^{e['k']} = {e['value']}" for e in entries) or "all zero"
    return Check(f"reciprocal[{frame_choice}]", ok, {"christoffel": entries}, text)


def check_lie_connection(P) -> Check:
    frame = P.frame() if "frame" in P.data else None
    if "christoffel" in P.data:
        C = P.christoffel(frame)
    else:
        C = reciprocal(associated_connection(frame if frame is not None else P.frame()))
    rep = lie_connection_report(C)
    ok = rep.is_lie_connection and rep.equivalence_holds
    summary = (f"flat={rep.flat} constant_torsion={rep.constant_torsion} "
               f"reciprocal_flat={rep.reciprocal_flat}")
    return Check("lie-connection", ok, rep.to_json(), summary)


def check_horizontal(P) -> Check:
    R = reciprocal(associated_connection(P.frame()))
    results = []
    for i, Y in enumerate(P.horizontal()):
        rep = verify_horizontal(R, Y)
        results.append({"field": i + 1, **rep.to_json()})
    ok = all(r["horizontal"] for r in results)
    return Check("horizontal", ok, {"fields": results},
                 f"{sum(r['horizontal'] for r in results)}/{len(results)} fields horizontal")


def check_brackets(P) -> Check:
    point = P.values("point")
    tv = P.values("tower_values")
    rep = opposite_initial_brackets(P.frame(), P.horizontal(), point, tv)
    n_ok = sum(1 for c in rep.checks if c[2])
    return Check("opposite-brackets", rep.ok, rep.to_json(),
                 f"[Y_i,Y_j] = -sum lambda_ij^k Y_k on {n_ok}/{len(rep.checks)} pairs")


def check_isogeny(P) -> Check:
    Fmap, target_frame = P.isogeny()
    theta = coframe(target_frame)
    source = P.frame()
    lam = infer_structure_constants(source)
    same = lam == theta.algebra
    omega = coframe(source, theta.algebra)
    ok, residual = verify_isogeny_pullback(Fmap, theta, omega)
    data = {"same_structure_constants": same, "pullback_equal": ok,
            "residual_nonzero": [{"index": [x + 1 for x in idx], "value": str(v)}
                                 for idx, v in residual.nonzero()]}
    return Check("isogeny", ok and same, data, f"F*theta = omega: {ok}")


def check_conjugating_map(P) -> Check:
    w1 = coframe(P.frame())
    w2 = coframe(P.frame("second_frame"))
    f = conjugating_map(w1, w2)
    return Check("conjugating-map", True, {"matrix": [[str(x) for x in row] for row in f]},
                 "f = -Omega . Omega'^-1 is a Lie algebra automorphism")


def check_sl2_build(P) -> Check:
    from .jets import ideal_identities, sl2_frame

    nu = P.nu()
    F = sl2_frame(nu, tuple(P.base.parameters))
    lam = infer_structure_constants(F)
    e0, e1 = ideal_identities(nu, tuple(P.base.parameters))
    det = F.det()
    ok = not e0 and not e1 and bool(det)
    expected = P.algebra()
    if expected is not None:
        ok = ok and expected == lam
    exp_det = P.data.get("expect", {}).get("determinant")
    if exp_det is not None:
        ok = ok and P.expr(exp_det, "/expect/determinant", det.chart) == det
    data = {"frame": F.to_json(), "structure_constants": lam.to_json(), "determinant": str(det),
            "E0.f - 2f": str(e0), "E1.f": str(e1)}
    return Check("sl2-build", ok, data, f"det = {det}; E0.f - 2f = {e0}; E1.f = {e1}")


def check_symmetry_ode(P) -> Check:
    from .jets import derive_symmetry_ode, expected_lin

    nu = P.nu()
    ode = derive_symmetry_ode(nu, tuple(P.base.parameters))
    ok = ode == expected_lin(nu, tuple(P.base.parameters))
    return Check("symmetry-ode", ok, {"ode": str(ode)}, str(ode))


def check_galois(P) -> Check:
    from .galois.classify import classify_reciprocal_sl2

    if "hypergeometric" in P.data:
        target = P.hypergeometric()
    else:
        target = P.nu()
        if target is None:
            raise SchemaError("galois needs an explicit nu or hypergeometric parameters", pointer="/nu")
    rep = classify_reciprocal_sl2(target)
    data = rep.to_json()
    ok = rep.matches_closed_form
    exp = P.data.get("expect", {}).get("psl2_class")
    if exp is not None:
        ok = ok and exp == rep.psl2.name
    return Check("galois", ok, data, f"SL2: {rep.sl2.name}; PSL2: {rep.psl2.name}")


SUITES = {
    "parallelism": ("structure", "coframe", "maurer-cartan", "reciprocal", "reciprocal-frame",
                    "lie-connection", "horizontal", "brackets", "conjugating-map", "isogeny"),
    "coparallelism": ("coframe", "maurer-cartan"),
    "connection": ("lie-connection",),
    "isogeny": ("isogeny",),
    "sl2": ("sl2-build", "symmetry-ode", "galois"),
    "galois": ("galois",),
}

CHECKS = {
    "structure": check_structure,
    "coframe": check_coframe,
    "maurer-cartan": check_maurer_cartan,
    "reciprocal": lambda P: check_reciprocal(P, "coordinate"),
    "reciprocal-frame": lambda P: check_reciprocal(P, "parallelism"),
    "lie-connection": check_lie_connection,
    "horizontal": check_horizontal,
    "brackets": check_brackets,
    "isogeny": check_isogeny,
    "conjugating-map": check_conjugating_map,
    "sl2-build": check_sl2_build,
    "symmetry-ode": check_symmetry_ode,
    "galois": check_galois,
}

_NEEDS = {"horizontal": "horizontal", "brackets": "horizontal", "conjugating-map": "second_frame",
          "isogeny": "isogeny", "galois": None}


def _applicable(P, name):
    key = _NEEDS.get(name)
    if name == "galois" and P.kind == "sl2":
        return "nu" in P.data and P.nu() is not None
    return key is None or key in P.data


def run_suite(P, names=None):
    if names is None:
        names = [n for n in SUITES[P.kind] if _applicable(P, n)]
    return [CHECKS[n](P) for n in names]


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------

def _emit(title, checks, as_json, extra=None):
    ok = all(c.ok for c in checks)
    if as_json:
        out = {"command": title, "ok": ok, "checks": [c.to_json() for c in checks]}
        if extra:
            out.update(extra)
        print(json.dumps(out, indent=2, sort_keys=True))
    else:
        print(title)
        for c in checks:
            print(f"  {'PASS' if c.ok else 'FAIL'}  {c.name}: {c.summary}")
            if not c.ok:
                print("        witness: " + json.dumps(c.data, sort_keys=True))
        print("verified" if ok else "verification failed")
    return 0 if ok else 1


def _emit_error(exc: ParallaxError, as_json):
    payload = exc.to_dict()
    if as_json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(f"error: {payload['error']}: {payload['message']}", file=sys.stderr)
        print("witness: " + json.dumps(payload["witness"], sort_keys=True), file=sys.stderr)


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _common():
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                   help="machine-readable output")
    p.add_argument("--frame", choices=("coordinate", "parallelism"), default=argparse.SUPPRESS,
                   help="frame used to report Christoffel symbols")
    p.add_argument("--tower", metavar="FILE", default=argparse.SUPPRESS,
                   help="JSON list of extra tower elements")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="parallax", parents=[common],
                                     description="Exact checks for rational parallelisms, Lie "
                                                 "connections and their Galois groups.")
    parser.add_argument("--version", action="version", version=f"parallax {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, helptext in (("check-parallelism", "infer structure constants of a frame"),
                           ("maurer-cartan", "coframe and Maurer-Cartan residual"),
                           ("reciprocal", "Christoffel symbols of the reciprocal connection"),
                           ("lie-connection", "flatness / torsion report"),
                           ("horizontal", "check horizontal fields of the reciprocal connection"),
                           ("isogeny", "check a pullback of coparallelisms"),
                           ("conjugating-map", "map between two commuting parallelisms"),
                           ("run", "run every check that applies to a manifest")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("manifest")

    p = sub.add_parser("sl2", parents=[common], help="the sl2 parallelism attached to nu")
    p.add_argument("action", choices=("build", "symmetry-ode"))
    p.add_argument("--nu", default="nu", help="rational function of z, or 'nu' for a formal one")
    p.add_argument("--params", default="", help="comma-separated parameter names")

    p = sub.add_parser("galois", parents=[common], help="Galois group of the reciprocal connection")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--nu", help="rational function of z")
    src.add_argument("--hypergeometric", nargs="+", metavar="KEY=VALUE",
                     help="a=.. b=.. c=.. or l=.. m=.. n=..")
    for flag in ("irrational", "rational", "integer"):
        p.add_argument(f"--{flag}", action="append", default=[], metavar="NAME",
                       help=f"flag a parameter as {flag}")

    p = sub.add_parser("example", parents=[common], help="run a built-in example")
    p.add_argument("name")
    p.add_argument("--check", default="all",
                   help="'all' or a comma-separated list of: " + ", ".join(CHECKS))

    sub.add_parser("list-examples", parents=[common], help="list the built-in examples")
    return parser


def _galois_manifest(args) -> dict:
    data = {"kind": "galois", "name": "command line"}
    if args.nu is not None:
        data["nu"] = args.nu
    else:
        hg = {}
        for item in args.hypergeometric:
            if "=" not in item:
                raise SchemaError(f"expected KEY=VALUE, got {item!r}", pointer="/hypergeometric")
            k, v = item.split("=", 1)
            hg[k.strip()] = v.strip()
        data["hypergeometric"] = hg
    flags = {}
    for flag in ("irrational", "rational", "integer"):
        for name in getattr(args, flag):
            flags[name] = flag
    if flags:
        data["flags"] = flags
    return data


def _dispatch(args, as_json):
    frame_choice = getattr(args, "frame", "coordinate")
    tower = getattr(args, "tower", None)
    cmd = args.command
    if cmd == "list-examples":
        cat = list_examples()
        if as_json:
            print(json.dumps({"examples": cat}, indent=2, sort_keys=True))
        else:
            for e in cat:
                print(f"{e['name']:16s} {e['kind']:12s} {e['description']}")
        return 0
    if cmd == "example":
        try:
            data = get_example(args.name)
        except KeyError:
            raise SchemaError(f"unknown example {args.name!r}", pointer="",
                              known=[e["name"] for e in list_examples()]) from None
        P = mf.load(data, tower)
        names = None
        if args.check != "all":
            names = [n.strip() for n in args.check.split(",") if n.strip()]
            bad = [n for n in names if n not in CHECKS]
            if bad:
                raise SchemaError(f"unknown check(s) {bad}", pointer="", known=list(CHECKS))
        return _emit(f"example {args.name}", run_suite(P, names), as_json)
    if cmd == "sl2":
        data = {"kind": "sl2", "nu": args.nu,
                "params": [p for p in args.params.split(",") if p]}
        P = mf.load(data, tower)
        check = check_sl2_build(P) if args.action == "build" else check_symmetry_ode(P)
        return _emit(f"sl2 {args.action}", [check], as_json)
    if cmd == "galois":
        P = mf.load(_galois_manifest(args), tower)
        check = check_galois(P)
        extra = {k: check.data[k] for k in ("sl2_class", "psl2_class", "certificate")}
        return _emit("galois", [check], as_json, extra)

    P = mf.load(args.manifest, tower)
    if cmd == "run":
        return _emit(f"run {P.name or args.manifest}", run_suite(P), as_json)
    single = {"check-parallelism": ["structure"], "maurer-cartan": ["coframe", "maurer-cartan"],
              "reciprocal": ["reciprocal" if frame_choice == "coordinate" else "reciprocal-frame"],
              "lie-connection": ["lie-connection"], "horizontal": ["horizontal"],
              "isogeny": ["isogeny"], "conjugating-map": ["conjugating-map"]}[cmd]
    return _emit(cmd, run_suite(P, single), as_json)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    as_json = getattr(args, "json", False)
    try:
        return _dispatch(args, as_json)
    except INPUT_ERRORS as exc:
        _emit_error(exc, as_json)
        return 2
    except ParallaxError as exc:
        _emit_error(exc, as_json)
        return 1


if __name__ == "__main__":
    sys.exit(main())
