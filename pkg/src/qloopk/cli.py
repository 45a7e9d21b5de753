"""Command-line front end.

Exit codes: 0 = pass/valid, 1 = mathematical failure (with a report on
stdout), 2 = usage error. All output is a pure function of the inputs;
JSON is emitted with sorted keys for byte-for-byte determinism.
"""

from __future__ import annotations

import argparse
import json
import sys
from importlib import resources

from .braid import TwistSpec
from .irred import (check_generic_tensor_irreducible, check_irreducible,
                    check_modified_nilpotent_irreducible, qsp_deformations)
from .kmat import (convert_grading, solve_K, verify_K_unitarity, verify_gre,
                   verify_standard_re)
from .linalg import Mat
from .repcore import build_rep, tensor, verify_relations
from .rmat import detect_degeneration, solve_R, verify_R_unitarity, verify_YBE
from .rootdata import (GradingShift, QSPParams, SatakeDiagram, affine_A,
                       validate_gsat)
from .scalars import Rat, parse as parse_rat


class UsageError(Exception):
    pass


# -- input parsing --------------------------------------------------------

def _parse_value(s: str) -> Rat:
    """Parse a scalar expression, registering bare identifiers as named
    constants on first sight (the CLI is where new evaluation points and
    parameters enter the system)."""
    import re
    from .scalars import ParseError, const
    for name in re.findall(r"[A-Za-z_][A-Za-z0-9_]*", s):
        if name not in ("p", "q", "z", "w"):
            const(name)
    try:
        return parse_rat(s)
    except ParseError as exc:
        raise UsageError(str(exc))

def _parse_vars(s: str | None) -> dict:
    out = {}
    if not s:
        return out
    for chunk in s.split(","):
        if "=" not in chunk:
            raise UsageError(f"bad --vars entry {chunk!r}, expected name=value")
        k, v = chunk.split("=", 1)
        out[k.strip()] = _parse_value(v.strip())
    return out


def _rep_spec(s: str) -> dict:
    parts = s.split(":")
    if parts[0] == "eval-sl2" and len(parts) == 3:
        return {"kind": "eval-sl2", "spin2": int(parts[1]), "a": parts[2]}
    if parts[0] == "eval-vector" and len(parts) == 3:
        return {"kind": "eval-vector", "N": int(parts[1]), "a": parts[2]}
    raise UsageError(f"bad --rep {s!r}; use eval-sl2:<spin2>:<a> or "
                     "eval-vector:<N>:<a>")


def _build(s: str, vars: dict):
    spec = _rep_spec(s)
    spec["a"] = _parse_value(str(spec["a"])).substitute(vars)
    return build_rep(spec)


def _parse_tau(s: str, n1: int):
    if s == "id":
        return tuple(range(n1))
    try:
        tau = tuple(int(x) for x in s.split(","))
    except ValueError:
        raise UsageError(f"bad --tau {s!r}; use 'id' or a comma permutation")
    if len(tau) != n1:
        raise UsageError(f"--tau needs {n1} entries")
    return tau


def _parse_nodes(s: str | None):
    if not s:
        return ()
    return tuple(int(x) for x in s.split(","))


def _load_scenario(name: str) -> dict:
    base = resources.files("qloopk").joinpath("scenarios")
    path = base.joinpath(f"{name}.json")
    if not path.is_file():
        avail = sorted(p.name[:-5] for p in base.iterdir()
                       if p.name.endswith(".json"))
        raise UsageError(f"unknown scenario {name!r}; available: {avail}")
    return json.loads(path.read_text())


class Scenario:
    """Materialized scenario: diagram, parameters, shift, twist, and reps,
    with a variable substitution applied throughout."""

    def __init__(self, data: dict, vars: dict):
        self.data = data
        dg = data["diagram"]
        self.cartan = affine_A(int(dg["n"]))
        self.diagram = SatakeDiagram(self.cartan, tuple(dg.get("X", ())),
                                     tuple(dg["tau"]))
        gamma = {int(k): _parse_value(v).substitute(vars)
                 for k, v in data["gamma"].items()}
        sigma = {int(k): _parse_value(v).substitute(vars)
                 for k, v in data["sigma"].items()}
        self.params = QSPParams(self.diagram, gamma, sigma)
        self.twist = TwistSpec.from_json(self.diagram, data.get("twist",
                                                                "semi-standard"))
        shift = data.get("shift", "tau-minimal")
        if shift == "tau-minimal":
            self.shift = GradingShift.tau_minimal(self.diagram)
        elif shift == "principal":
            self.shift = GradingShift.principal(self.cartan)
        else:
            raise UsageError(f"unknown shift {shift!r}")
        self.reps = {k: _build(v, vars) for k, v in data["reps"].items()}

    @staticmethod
    def stage(data: dict, stage: str, vars: dict) -> "Scenario":
        merged = dict(data.get("stage_vars", {}).get(stage, {}))
        extra = {k: _parse_value(v) for k, v in merged.items()}
        extra.update(vars)
        return Scenario(data, extra)


# -- output ---------------------------------------------------------------

def _matrix_latex(rows) -> str:
    body = " \\\\\n".join(" & ".join(str(e) for e in row) for row in rows)
    return "\\begin{pmatrix}\n" + body + "\n\\end{pmatrix}"


def _flatten_text(obj, prefix="") -> list[str]:
    lines = []
    if isinstance(obj, dict):
        for k in sorted(obj):
            lines.extend(_flatten_text(obj[k], f"{prefix}{k}."))
    elif isinstance(obj, list) and obj and isinstance(obj[0], list):
        for i, row in enumerate(obj):
            lines.append(f"{prefix}{i}: " + "  ".join(str(x) for x in row))
    else:
        lines.append(f"{prefix[:-1]}: {obj}")
    return lines


def _emit(payload: dict, fmt: str):
    if fmt == "json":
        print(json.dumps(payload, sort_keys=True, indent=2))
    elif fmt == "latex":
        out = []

        def walk(obj, prefix):
            if isinstance(obj, dict):
                for k in sorted(obj):
                    walk(obj[k], f"{prefix}{k}.")
            elif isinstance(obj, list) and obj and isinstance(obj[0], list):
                out.append(f"% {prefix[:-1]}")
                out.append(_matrix_latex(obj))
            else:
                out.append(f"% {prefix[:-1]}: {json.dumps(obj, sort_keys=True)}")

        walk(payload, "")
        print("\n".join(out))
    else:
        print("\n".join(_flatten_text(payload)))


def _report_exit(ok: bool) -> int:
    return 0 if ok else 1


# -- handlers -------------------------------------------------------------

def _cmd_gsat_validate(args) -> tuple[int, dict]:
    if args.type != "A":
        raise UsageError("only untwisted type A is built in")
    cartan = affine_A(args.n)
    X = _parse_nodes(args.X)
    tau = _parse_tau(args.tau, args.n + 1)
    report = validate_gsat(cartan, X, tau)
    return _report_exit(report.valid), {"validate": report.to_json()}


def _reps_from_args(args, vars, need: int):
    specs = args.rep or []
    if len(specs) != need:
        raise UsageError(f"expected {need} --rep arguments, got {len(specs)}")
    return [_build(s, vars) for s in specs]


def _cmd_rep_build(args) -> tuple[int, dict]:
    vars = _parse_vars(args.vars)
    (V,) = _reps_from_args(args, vars, 1)
    return 0, {"label": V.label, "dim": V.dim,
               "weights": [[str(x) for x in wt] for wt in V.weights],
               "E1": V.E[1].to_json(), "F1": V.F[1].to_json(),
               "K1": V.K[1].to_json()}


def _cmd_rep_check(args) -> tuple[int, dict]:
    vars = _parse_vars(args.vars)
    specs = args.rep or []
    if not specs:
        raise UsageError("rep check needs at least one --rep")
    reps = [_build(s, vars) for s in specs]
    V = reps[0]
    for W in reps[1:]:
        V = tensor(V, W)
    report = verify_relations(V)
    return _report_exit(report.ok), {"relations": report.to_json()}


def _cmd_rmatrix(args) -> tuple[int, dict]:
    vars = _parse_vars(args.vars)
    if args.action == "compute":
        V, W = _reps_from_args(args, vars, 2)
        res = solve_R(V, W)
        return 0, {"rmatrix": res.to_json()}
    if args.action == "verify-ybe":
        U, V, W = _reps_from_args(args, vars, 3)
        report = verify_YBE(U, V, W)
        return _report_exit(report.ok), {"ybe": report.to_json()}
    if args.action == "verify-unitarity":
        V, W = _reps_from_args(args, vars, 2)
        report = verify_R_unitarity(V, W)
        return _report_exit(report.ok), {"unitarity": report.to_json()}
    if args.action == "degeneration":
        V, W = _reps_from_args(args, vars, 2)
        point = _parse_vars(args.at)
        if not point:
            raise UsageError("degeneration needs --at name=value,...")
        kind = detect_degeneration(V, W, {k: v for k, v in point.items()})
        return 0, {"degeneration": {"at": {k: str(v) for k, v in point.items()},
                                    "kind": kind}}
    raise UsageError(f"unknown rmatrix action {args.action!r}")


def _cmd_kmatrix(args) -> tuple[int, dict]:
    vars = _parse_vars(args.vars)
    data = _load_scenario(args.scenario)
    if args.action == "compute":
        sc = Scenario(data, vars)
        res = solve_K(sc.reps["V"], sc.twist, sc.shift, sc.params)
        return 0, {"kmatrix": res.to_json()}
    if args.action == "verify-gre":
        sc = Scenario(data, vars)
        report = verify_gre(sc.reps["V"], sc.reps["W"], sc.twist, sc.shift,
                            sc.params)
        return _report_exit(report.ok), {"gre": report.to_json()}
    if args.action == "verify-re":
        sc = Scenario.stage(data, "verify-re", vars)
        report = verify_standard_re(sc.reps["V"], sc.reps["W"], sc.params,
                                    sc.shift)
        return _report_exit(report.ok), {"re": report.to_json()}
    if args.action == "verify-unitarity":
        sc = Scenario.stage(data, "verify-unitarity", vars)
        report = verify_K_unitarity(sc.reps["V"], sc.twist, sc.shift,
                                    sc.params)
        return _report_exit(report.ok), {"k-unitarity": report.to_json()}
    if args.action == "convert-grading":
        sc = Scenario(data, vars)
        V = sc.reps["V"]
        Kpr = solve_K(V, sc.twist, GradingShift.principal(sc.cartan),
                      sc.params)
        converted = convert_grading(Kpr, V)
        direct = solve_K(V, sc.twist, GradingShift.tau_minimal(sc.diagram),
                         sc.params)
        ratio = _proportionality(converted, direct.matrix)
        ok = ratio is not None
        return _report_exit(ok), {
            "convert-grading": {"converted": converted.to_json(),
                                "direct": direct.matrix.to_json(),
                                "scalar": None if ratio is None else str(ratio),
                                "ok": ok}}
    raise UsageError(f"unknown kmatrix action {args.action!r}")


def _proportionality(A: Mat, B: Mat):
    """The scalar A/B if A = c B entrywise, else None."""
    ratio = None
    for i in range(A.nrows):
        for j in range(A.ncols):
            x, y = A[i, j], B[i, j]
            if x.is_zero() != y.is_zero():
                return None
            if x.is_zero():
                continue
            r = x / y
            if ratio is None:
                ratio = r
            elif r != ratio:
                return None
    return ratio


def _cmd_irred(args) -> tuple[int, dict]:
    vars = _parse_vars(args.vars)
    if args.mode == "tensor":
        V, W = _reps_from_args(args, vars, 2)
        verdict = check_generic_tensor_irreducible(V, W)
    elif args.mode == "qsp":
        sc = Scenario(_load_scenario(args.scenario), vars)
        V = sc.reps["V"]
        verdict = check_modified_nilpotent_irreducible(
            V, qsp_deformations(V, sc.params))
    else:
        (V,) = _reps_from_args(args, vars, 1)
        verdict = check_irreducible([V.F[i] for i in V.cartan.nodes])
    return _report_exit(verdict.irreducible is True), {"irred": verdict.to_json()}


def _cmd_pipeline(args) -> tuple[int, dict]:
    vars = _parse_vars(args.vars)
    data = _load_scenario(args.scenario)
    stages = {}
    ok = True

    sc = Scenario(data, vars)
    V, W = sc.reps["V"], sc.reps["W"]
    resV = solve_K(V, sc.twist, sc.shift, sc.params)
    stages["solve-K"] = {"kernel_dim": resV.kernel_dim,
                         "normalization": resV.normalization.get("mode")}
    gre = verify_gre(V, W, sc.twist, sc.shift, sc.params, KV=resV)
    stages["verify-gre"] = gre.to_json()
    ok = ok and gre.ok

    sc_re = Scenario.stage(data, "verify-re", vars)
    re = verify_standard_re(sc_re.reps["V"], sc_re.reps["W"], sc_re.params,
                            sc_re.shift)
    stages["verify-re"] = re.to_json()
    ok = ok and re.ok

    sc_un = Scenario.stage(data, "verify-unitarity", vars)
    un = verify_K_unitarity(sc_un.reps["V"], sc_un.twist, sc_un.shift,
                            sc_un.params)
    stages["verify-unitarity"] = un.to_json()
    ok = ok and un.ok

    return _report_exit(ok), {"pipeline": {"scenario": data["name"],
                                           "stages": stages, "ok": ok}}


# -- argument tree --------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="qloopk",
        description="Exact R- and K-matrices for quantum loop algebras")
    top.add_argument("--output", choices=("json", "latex", "text"),
                     default="json")
    sub = top.add_subparsers(dest="command", required=True)

    def common(p, reps=False, scenario=False):
        p.add_argument("--output", choices=("json", "latex", "text"),
                       default=argparse.SUPPRESS)
        p.add_argument("--vars", help="substitutions, e.g. a=2,s0=0")
        if reps:
            p.add_argument("--rep", action="append",
                           help="eval-sl2:<spin2>:<a> or eval-vector:<N>:<a>")
        if scenario:
            p.add_argument("--scenario", default="qonsager-sl2-fundamental")

    g = sub.add_parser("gsat", help="generalized Satake diagram checks")
    gs = g.add_subparsers(dest="action", required=True)
    gv = gs.add_parser("validate")
    gv.add_argument("--output", choices=("json", "latex", "text"),
                    default=argparse.SUPPRESS)
    gv.add_argument("--type", default="A")
    gv.add_argument("--n", type=int, required=True)
    gv.add_argument("--X", default="")
    gv.add_argument("--tau", default="id")
    gv.set_defaults(func=_cmd_gsat_validate)

    r = sub.add_parser("rep", help="build and check modules")
    rs = r.add_subparsers(dest="action", required=True)
    rb = rs.add_parser("build")
    common(rb, reps=True)
    rb.set_defaults(func=_cmd_rep_build)
    rc = rs.add_parser("check")
    common(rc, reps=True)
    rc.set_defaults(func=_cmd_rep_check)

    rm = sub.add_parser("rmatrix", help="rational R-matrices")
    rms = rm.add_subparsers(dest="action", required=True)
    for name in ("compute", "verify-ybe", "verify-unitarity", "degeneration"):
        p = rms.add_parser(name)
        common(p, reps=True)
        if name == "degeneration":
            p.add_argument("--at", help="point, e.g. b=q^2*a,z=1")
        p.set_defaults(func=_cmd_rmatrix)

    km = sub.add_parser("kmatrix", help="rational K-matrices")
    kms = km.add_subparsers(dest="action", required=True)
    for name in ("compute", "verify-gre", "verify-re", "verify-unitarity",
                 "convert-grading"):
        p = kms.add_parser(name)
        common(p, scenario=True)
        p.set_defaults(func=_cmd_kmatrix)

    ir = sub.add_parser("irred", help="restricted irreducibility")
    irs = ir.add_subparsers(dest="action", required=True)
    ic = irs.add_parser("check")
    common(ic, reps=True, scenario=True)
    ic.add_argument("--mode", choices=("lowering", "qsp", "tensor"),
                    default="lowering")
    ic.set_defaults(func=_cmd_irred)

    pl = sub.add_parser("pipeline", help="end-to-end scenario runs")
    pls = pl.add_subparsers(dest="action", required=True)
    pr = pls.add_parser("run")
    pr.add_argument("scenario")
    pr.add_argument("--output", choices=("json", "latex", "text"),
                    default=argparse.SUPPRESS)
    pr.add_argument("--vars")
    pr.set_defaults(func=_cmd_pipeline)

    return top


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        code, payload = args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    _emit(payload, args.output)
    return code


if __name__ == "__main__":
    sys.exit(main())
