"""Command-line front end.

Map descriptions are a tiny textual grammar over the catalog constructors:

    pi(5)  mu(3)  nu(4)  identity(3)  eigenmap(quadratic, 2)  eigenmap(hopf)
    curve_s2  curve_s3(3/2)
    cone(pi(5), 3/4)  join(pi(5), mu(5), 1/3)

Rational parameters are written exactly as "p/q"; decimals are rejected so
every angle stays certifiable.  A cone or join may omit its mixing parameter,
in which case the angle is solved for the requested flavor before the command
runs.  `identity_sphere` is accepted as an alias for `identity`.

Exit codes are a stable contract:

    0  success / all verifications passed
    1  usage error, parse error, or I/O failure
    2  inadmissible angle or unsupported domain
    3  unsupported energy density
    4  verification failure

Reports are JSON-compatible trees with a single integer schema version.
Identical inputs (including seed and tolerances) produce byte-identical
output: no timestamps, sorted keys, default float repr.
"""

import argparse
import json
import math
import re
import sys
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple, Union

from bitension import __version__
from bitension._rational import RAT
from bitension.catalog import (
    ARC_LENGTH,
    AngleSolution,
    Cone,
    Join,
    SphereMap,
    cone,
    join,
    make_cubic_eigenmap,
    make_curve_s2,
    make_curve_s3,
    make_hopf_eigenmap,
    make_identity_sphere,
    make_mu,
    make_nu,
    make_pi,
    make_quadratic_eigenmap,
)
from bitension.deformer import (
    FAMILY_RANGES,
    admissible_range,
    solve_cone_biharmonic,
    solve_cone_cbiharmonic,
    solve_join_biharmonic,
    solve_join_cbiharmonic,
)
from bitension.errors import (
    BitensionError,
    CertificationError,
    InadmissibleAngle,
    MapParseError,
    UnsupportedDensity,
    UnsupportedDomain,
)
from bitension.functionals import DEFAULT_SAMPLES, bienergy, conformal_bienergy, energy
from bitension.verifier import (
    DEFAULT_H,
    DEFAULT_NUMERIC_TOL,
    SamplePlan,
    certify_solution_suite,
    residual_scan,
    verify_curve,
)

__all__ = ["main", "parse_map", "build_map", "emit_descriptions", "SCHEMA_VERSION"]

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INADMISSIBLE = 2
EXIT_DENSITY = 3
EXIT_FAILED = 4


# ---------------------------------------------------------------------------
# map descriptions


@dataclass(frozen=True)
class MapNode:
    """One node of a parsed map description."""

    name: str
    args: Tuple[Union["MapNode", RAT, int, str], ...]
    position: int


_TOKEN = re.compile(
    r"(?P<ws>\s+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<num>-?\d+)|(?P<punct>[(),/])"
)


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        match = _TOKEN.match(text, pos)
        if match is None:
            raise MapParseError(f"unexpected character {text[pos]!r}", pos)
        if match.lastgroup != "ws":
            tokens.append((match.lastgroup, match.group(), pos))
        pos = match.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.index = 0

    def peek(self):
        return self.tokens[self.index]

    def take(self, kind: str, value: Optional[str] = None):
        tok_kind, tok_value, pos = self.tokens[self.index]
        if tok_kind != kind or (value is not None and tok_value != value):
            want = value if value is not None else kind
            raise MapParseError(f"expected {want}, found {tok_value or 'end of input'}", pos)
        self.index += 1
        return tok_value, pos

    def parse(self) -> MapNode:
        node = self.node()
        kind, value, pos = self.peek()
        if kind != "end":
            raise MapParseError(f"trailing input {value!r}", pos)
        return node

    def node(self) -> MapNode:
        name, pos = self.take("name")
        args = ()
        if self.peek()[:2] == ("punct", "("):
            self.take("punct", "(")
            if self.peek()[:2] != ("punct", ")"):
                args = (self.arg(),)
                while self.peek()[:2] == ("punct", ","):
                    self.take("punct", ",")
                    args += (self.arg(),)
            self.take("punct", ")")
        return MapNode(name, args, pos)

    def arg(self):
        kind, value, pos = self.peek()
        if kind == "num":
            self.take("num")
            if self.peek()[:2] == ("punct", "/"):
                self.take("punct", "/")
                denom, dpos = self.take("num")
                if int(denom) <= 0:
                    raise MapParseError("fraction denominator must be positive", dpos)
                return RAT(int(value), int(denom))
            return int(value)
        if kind == "name":
            node = self.node()
            if not node.args and self.peek()[:2] not in (("punct", ","), ("punct", ")")):
                raise MapParseError(f"unexpected input after {node.name}", self.peek()[2])
            return node
        raise MapParseError(f"expected an argument, found {value or 'end of input'}", pos)


def parse_map(text: str) -> MapNode:
    """Parse a map description; raises MapParseError with a position."""
    return _Parser(text).parse()


def _arity(node: MapNode, kinds: str):
    """Check argument kinds: n int, q rational, m map node, w word.
    A '?' marks the preceding kind optional."""
    spec = []
    for ch in kinds:
        if ch == "?":
            spec[-1] = (spec[-1][0], True)
        else:
            spec.append((ch, False))
    required = sum(1 for _, optional in spec if not optional)
    allowed = len(spec)
    if not (required <= len(node.args) <= allowed):
        raise MapParseError(
            f"{node.name} takes {required if required == allowed else f'{required}-{allowed}'}"
            f" argument(s), got {len(node.args)}",
            node.position,
        )
    out = []
    for (kind, _), arg in zip(spec, node.args):
        if kind == "n" and isinstance(arg, int):
            out.append(arg)
        elif kind == "q" and isinstance(arg, (int, RAT)):
            out.append(RAT(arg))
        elif kind == "m" and isinstance(arg, MapNode):
            out.append(arg)
        elif kind == "w" and isinstance(arg, MapNode) and not arg.args:
            out.append(arg.name)
        else:
            want = {"n": "an integer", "q": "a rational p/q", "m": "a map", "w": "a word"}[kind]
            raise MapParseError(f"{node.name} argument must be {want}", node.position)
    return out


_EIGENMAPS = {
    "quadratic": make_quadratic_eigenmap,
    "quad": make_quadratic_eigenmap,
    "cubic": make_cubic_eigenmap,
    "hopf": make_hopf_eigenmap,
}

_CONE_SOLVERS = {
    "biharmonic": lambda v: solve_cone_biharmonic(v, certify=False)[0],
    "cbiharmonic": lambda v: solve_cone_cbiharmonic(v, certify=False),
}
_JOIN_SOLVERS = {
    "biharmonic": lambda a, b: solve_join_biharmonic(a, b, certify=False)[0],
    "cbiharmonic": lambda a, b: solve_join_cbiharmonic(a, b, certify=False),
}


def _check_t(t: RAT, node: MapNode) -> RAT:
    if not 0 < t < 1:
        raise ValueError(f"mixing parameter t = {t} lies outside (0,1)")
    return t


def build_map(node: MapNode, flavor: str = "biharmonic") -> SphereMap:
    """Realize a parsed description.  Omitted cone/join angles are solved
    for the given flavor (without re-certification; verification is the
    verify command's job)."""
    name = node.name
    if name in ("pi", "mu", "nu"):
        (m,) = _arity(node, "n")
        return {"pi": make_pi, "mu": make_mu, "nu": make_nu}[name](m)
    if name in ("identity", "identity_sphere"):
        (m,) = _arity(node, "n")
        return make_identity_sphere(m)
    if name == "eigenmap":
        kind = _arity(node, "wn?")[0]
        maker = _EIGENMAPS.get(kind)
        if maker is None:
            raise MapParseError(
                f"unknown eigenmap kind {kind!r}; known: {', '.join(sorted(_EIGENMAPS))}",
                node.position,
            )
        if kind == "hopf":
            _arity(node, "w")
            return maker()
        (_, m) = _arity(node, "wn")
        return maker(m)
    if name == "curve_s2":
        _arity(node, "")
        return make_curve_s2()
    if name == "curve_s3":
        (asq,) = _arity(node, "q")
        return make_curve_s3(asq)
    if name == "cone":
        args = _arity(node, "mq?")
        base = build_map(args[0], flavor)
        t = _check_t(args[1], node) if len(args) == 2 else _CONE_SOLVERS[flavor](base).t
        return cone(base, t)
    if name == "join":
        args = _arity(node, "mmq?")
        v1 = build_map(args[0], flavor)
        v2 = build_map(args[1], flavor)
        t = _check_t(args[2], node) if len(args) == 3 else _JOIN_SOLVERS[flavor](v1, v2).t
        return join(v1, v2, t)
    raise MapParseError(f"unknown map constructor {name!r}", node.position)


def maps_equal(a: SphereMap, b: SphereMap) -> bool:
    """Structural equality (SphereMap itself compares by identity)."""
    if not (
        a.domain == b.domain
        and a.target_dim == b.target_dim
        and a.name == b.name
        and a.eigenvalue == b.eigenvalue
        and a.degree == b.degree
        and a.curve_param == b.curve_param
    ):
        return False
    x, y = a.body, b.body
    if isinstance(x, Cone) and isinstance(y, Cone):
        return x.t == y.t and maps_equal(x.base, y.base)
    if isinstance(x, Join) and isinstance(y, Join):
        return x.t == y.t and maps_equal(x.left, y.left) and maps_equal(x.right, y.right)
    return x == y


# ---------------------------------------------------------------------------
# catalog data

_CATALOG_ROWS = (
    ("pi_cone", "cone(pi(m))", "t = (3/2)(m-3)/(m-1)"),
    ("mu_cone", "cone(mu(m))", "t = (m-2)/m"),
    ("nu_cone", "cone(nu(m))", "t = (5/6)(m-1)/(m+1)"),
    ("pi_mu_join", "join(pi(m), mu(m))", "cos 2a = 2(m-4)/(m+1)"),
    ("pi_nu_join", "join(pi(m), nu(m))", "cos 2b = (m-4)/(m+2)"),
    ("mu_nu_join", "join(mu(m), nu(m))", "cos 2g = 2(m-4)/(m+3)"),
    (
        "small_hypersphere_cbiharmonic",
        "cone(identity(m))",
        "t = 1/2 + (m-1)(m-3)/(3m)",
    ),
)

# one description per family, solved angles written out; `catalog --emit`
# prints these and each must re-parse to a structurally identical map
_EMIT_DESCRIPTIONS = (
    "pi(4)",
    "pi(5)",
    "mu(3)",
    "nu(2)",
    "identity(3)",
    "eigenmap(quadratic, 2)",
    "eigenmap(cubic, 2)",
    "eigenmap(hopf)",
    "curve_s2",
    "curve_s3(3/2)",
    "cone(pi(5), 3/4)",
    "cone(mu(3), 1/3)",
    "cone(nu(2), 5/18)",
    "join(pi(5), mu(5), 1/3)",
    "join(pi(4), nu(4), 1/2)",
    "join(mu(5), nu(5), 3/8)",
    "cone(identity(3), 1/2)",
    "cone(identity(2), 1/3)",
    "cone(eigenmap(quadratic, 2), 4/9)",
    "join(identity(5), eigenmap(cubic, 5), 1/3)",
)


def emit_descriptions() -> Tuple[str, ...]:
    """The catalog's emittable map descriptions."""
    return _EMIT_DESCRIPTIONS


def _range_text(lo: int, hi: Optional[int]) -> str:
    return f"{lo} <= m <= {hi}" if hi is not None else f"m >= {lo}"


# ---------------------------------------------------------------------------
# report documents


def _clean(value):
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {k: _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    return value


def _document(command: str, run: dict, cases=(), angles=(), energies=(), passed: bool = True):
    return _clean(
        {
            "schema_version": SCHEMA_VERSION,
            "tool": {"name": "bitension", "version": __version__},
            "command": command,
            "run": run,
            "cases": list(cases),
            "angles": list(angles),
            "energies": list(energies),
            "passed": passed,
        }
    )


def _angle_entry(sol: AngleSolution, flavor: str) -> dict:
    return {
        "flavor": flavor,
        "t": str(sol.t),
        "t_decimal": float(sol.t),
        "cos_double_angle": str(sol.cos_double_angle),
        "constraint_source": sol.constraint_source,
        "dimension_note": sol.dimension_note,
        "admissible": sol.admissible,
    }


def _energy_entry(value, flavor: str) -> dict:
    return {
        "flavor": flavor,
        "value": value.value,
        "std_error": value.std_error,
        "scheme": value.scheme,
        "samples": value.samples,
        "seed": value.seed,
        "available": value.available,
    }


def _num(x) -> str:
    return "-" if x is None else repr(x)


def _render_text(doc: dict) -> str:
    lines = [f"bitension report (schema {doc.get('schema_version', '?')})"]
    run = doc.get("run") or {}
    described = ", ".join(f"{k}={v}" for k, v in sorted(run.items()) if v is not None)
    if described:
        lines.append(f"run: {described}")
    for entry in doc.get("angles") or []:
        lines.append(
            f"t = {entry.get('t')} = {_num(entry.get('t_decimal'))}"
            f"  (cos of doubled angle {entry.get('cos_double_angle')})"
        )
        lines.append(f"source: {entry.get('constraint_source')}")
        if entry.get("dimension_note"):
            lines.append(f"note: {entry['dimension_note']}")
    for entry in doc.get("energies") or []:
        lines.append(
            f"{entry.get('flavor')} = {_num(entry.get('value'))}"
            f" +/- {_num(entry.get('std_error'))}  [{entry.get('scheme')}]"
        )
    cases = doc.get("cases") or []
    for case in cases:
        lines.append(
            f"{'PASS' if case.get('passed') else 'FAIL'}"
            f"  {case.get('case')}  [{case.get('equation')}]"
            f"  status={case.get('status')}"
            f"  max={_num(case.get('numeric_max'))}"
            f"  fd_dev={_num(case.get('fd_deviation'))}"
        )
        if case.get("witness"):
            lines.append(f"      witness: {case['witness']}")
    if cases:
        counts: dict = {}
        for case in cases:
            counts[case.get("status")] = counts.get(case.get("status"), 0) + 1
        summary = ", ".join(f"{k}: {v}" for k, v in sorted(counts.items()))
        lines.append(f"cases: {len(cases)} ({summary})")
    lines.append("PASSED" if doc.get("passed") else "FAILED")
    return "\n".join(lines) + "\n"


def _emit(doc: dict, fmt: str, out: Optional[str]) -> None:
    if fmt == "json":
        text = json.dumps(doc, sort_keys=True, indent=2, allow_nan=False) + "\n"
    else:
        text = _render_text(doc)
    if out:
        with open(out, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# subcommands


def _cmd_catalog(args) -> int:
    if args.emit:
        doc = _document(
            "catalog", {"emit": True}, cases=(), angles=(), energies=(), passed=True
        )
        doc["descriptions"] = list(_EMIT_DESCRIPTIONS)
        if args.format == "json":
            _emit(doc, "json", args.out)
        else:
            text = "\n".join(_EMIT_DESCRIPTIONS) + "\n"
            if args.out:
                with open(args.out, "w", encoding="utf-8") as handle:
                    handle.write(text)
            else:
                sys.stdout.write(text)
        return EXIT_OK
    rows = _CATALOG_ROWS
    if args.family:
        try:
            admissible_range(args.family)
        except ValueError as exc:
            raise _Usage(str(exc)) from exc
        rows = [r for r in _CATALOG_ROWS if args.family in (r[0],) + _alias_keys(r[0])]
    families = [
        {
            "family": key,
            "construction": construction,
            "range": _range_text(*admissible_range(key)),
            "formula": formula,
        }
        for key, construction, formula in rows
    ]
    doc = _document("catalog", {"family": args.family}, passed=True)
    doc["families"] = families
    if args.format == "json":
        _emit(doc, "json", args.out)
    else:
        width = max(len(f["family"]) for f in families)
        lines = [
            f"{f['family']:<{width}}  {f['range']:<14}  {f['formula']}  via {f['construction']}"
            for f in families
        ]
        text = "\n".join(lines) + "\n"
        if args.out:
            with open(args.out, "w", encoding="utf-8") as handle:
                handle.write(text)
        else:
            sys.stdout.write(text)
    return EXIT_OK


def _alias_keys(canonical: str) -> Tuple[str, ...]:
    return tuple(a for a, c in (("pi", "pi_cone"), ("mu", "mu_cone"), ("nu", "nu_cone"),
                                ("w1", "pi_mu_join"), ("w2", "pi_nu_join"), ("w3", "mu_nu_join"))
                 if c == canonical)


def _cmd_solve(args) -> int:
    node = parse_map(args.map)
    if node.name not in ("cone", "join"):
        raise MapParseError("solve needs a cone(...) or join(...) description", node.position)
    flavor = args.flavor
    try:
        if node.name == "cone":
            parsed = _arity(node, "mq?")
            base = build_map(parsed[0], flavor)
            sol = _CONE_SOLVERS[flavor](base)
        else:
            parsed = _arity(node, "mmq?")
            sol = _JOIN_SOLVERS[flavor](
                build_map(parsed[0], flavor), build_map(parsed[1], flavor)
            )
    except InadmissibleAngle as exc:
        # still print the solved value; only the exit code reports rejection
        sol = exc.solution
    doc = _document(
        "solve",
        {"map": args.map, "flavor": flavor},
        angles=[_angle_entry(sol, flavor)],
        passed=sol.admissible,
    )
    _emit(doc, args.format, args.out)
    return EXIT_OK if sol.admissible else EXIT_INADMISSIBLE


def _cmd_verify(args) -> int:
    if bool(args.suite) == bool(args.map):
        raise _Usage("verify needs exactly one of --map or --suite")
    run = {
        "map": args.map,
        "suite": bool(args.suite),
        "flavor": args.flavor,
        "seed": args.seed,
        "samples": args.samples,
        "tol": args.tol,
        "h": args.h,
    }
    if args.suite:
        summary = certify_solution_suite(
            seed=args.seed,
            count=args.samples or 8,
            h=args.h,
            tol=args.tol,
        )
        passed = summary.consistent
        cases = [r.as_dict() for r in summary.reports]
    else:
        u = build_map(parse_map(args.map), args.flavor)
        if u.domain.kind == ARC_LENGTH:
            report = verify_curve(u, tol=args.tol, h=args.h)
        else:
            plan = SamplePlan(u.domain, count=args.samples or 64, seed=args.seed)
            report = residual_scan(u, args.flavor, plan, tol=args.tol, h=args.h)
        passed = report.passed
        cases = [report.as_dict()]
    doc = _document("verify", run, cases=cases, passed=passed)
    _emit(doc, args.format, args.out)
    return EXIT_OK if passed else EXIT_FAILED


_ENERGIES = {"E": energy, "E2": bienergy, "E2c": conformal_bienergy}


def _cmd_energy(args) -> int:
    u = build_map(parse_map(args.map), "biharmonic")
    value = _ENERGIES[args.flavor](u, samples=args.samples or 100_000, seed=args.seed)
    doc = _document(
        "energy",
        {"map": args.map, "flavor": args.flavor, "samples": args.samples, "seed": args.seed},
        energies=[_energy_entry(value, args.flavor)],
        passed=value.available,
    )
    _emit(doc, args.format, args.out)
    return EXIT_OK if value.available else EXIT_FAILED


def _cmd_report(args) -> int:
    try:
        with open(args.path, "r", encoding="utf-8") as handle:
            doc = json.load(handle)
    except (OSError, json.JSONDecodeError) as exc:
        raise _Usage(f"cannot read report {args.path}: {exc}") from exc
    if not isinstance(doc, dict) or not isinstance(doc.get("schema_version"), int):
        raise _Usage(f"{args.path} is not a report document")
    # readers ignore unknown fields, so any schema_version >= 1 renders
    passed = doc.get("passed")
    if passed is None:
        passed = all(c.get("passed") for c in doc.get("cases", []))
    _emit(doc, args.format, args.out)
    return EXIT_OK if passed else EXIT_FAILED


# ---------------------------------------------------------------------------
# argument parsing


class _Usage(Exception):
    pass


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise _Usage(message)


def _build_parser() -> _ArgumentParser:
    parser = _ArgumentParser(prog="bitension", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, *, map_flag=False, verify_flags=False, energy_flags=False):
        if map_flag:
            p.add_argument("--map", help="map description, e.g. 'cone(pi(5), 3/4)'")
        if verify_flags:
            p.add_argument("--seed", type=int, default=0)
            p.add_argument("--samples", type=int, default=None)
            p.add_argument("--tol", type=float, default=DEFAULT_NUMERIC_TOL)
            p.add_argument("--h", type=float, default=DEFAULT_H)
        if energy_flags:
            p.add_argument("--seed", type=int, default=0)
            p.add_argument("--samples", type=int, default=None)
        p.add_argument("--out", default=None, help="write the report to this path")
        p.add_argument("--format", choices=("json", "text"), default="text")

    p = sub.add_parser("catalog", help="list solution families and formulas")
    p.add_argument("--family", default=None, help="restrict to one family (w1, mu_cone, ...)")
    p.add_argument("--emit", action="store_true", help="print re-parseable map descriptions")
    common(p)
    p.set_defaults(func=_cmd_catalog)

    p = sub.add_parser("solve", help="solve the mixing angle of a cone or join")
    common(p, map_flag=True)
    p.add_argument("--flavor", choices=("biharmonic", "cbiharmonic"), default="biharmonic")
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("verify", help="verify a map or the whole solution suite")
    common(p, map_flag=True, verify_flags=True)
    p.add_argument("--suite", action="store_true", help="run the full solution matrix")
    p.add_argument(
        "--flavor",
        choices=("biharmonic", "cbiharmonic", "harmonic"),
        default="biharmonic",
    )
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("energy", help="compute an energy functional")
    common(p, map_flag=True, energy_flags=True)
    p.add_argument("--flavor", choices=("E", "E2", "E2c"), default="E2")
    p.set_defaults(func=_cmd_energy)

    p = sub.add_parser("report", help="re-render a previously written report")
    p.add_argument("path")
    common(p)
    p.set_defaults(func=_cmd_report)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "map", None) is None and args.command in ("solve", "energy"):
            raise _Usage(f"{args.command} needs --map")
        return args.func(args)
    except _Usage as exc:
        print(f"bitension: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except MapParseError as exc:
        print(f"bitension: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (InadmissibleAngle, UnsupportedDomain) as exc:
        print(f"bitension: {exc}", file=sys.stderr)
        return EXIT_INADMISSIBLE
    except UnsupportedDensity as exc:
        print(f"bitension: {exc}", file=sys.stderr)
        return EXIT_DENSITY
    except CertificationError as exc:
        print(f"bitension: {exc}", file=sys.stderr)
        return EXIT_FAILED
    except ValueError as exc:
        # degenerate mathematics (equal eigenvalues, t outside (0,1), ...)
        print(f"bitension: {exc}", file=sys.stderr)
        return EXIT_INADMISSIBLE
    except OSError as exc:
        print(f"bitension: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
