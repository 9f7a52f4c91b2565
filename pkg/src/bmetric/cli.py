"""Command-line front end.

Exit codes: 0 all checks pass, 1 a check failed (the report is still
written), 2 the input could not be parsed or fails structural validation.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import random
import sys
from typing import Any, Sequence

from . import connection as pc
from . import curvature as cv
from .classification import classify
from .errors import ConsistencyError, StructureError
from .example import PARAMS, ExampleParams, verify_paper_claims
from .manifold import (AlgebraModel, covariant_derivative, fundamental_F,
                       jacobi_check, levi_civita, riemann, scalar_curvatures,
                       validate_structure)
from .report import Check, Report, identity, vanishes
from .scalar import format_rational, to_rational
from .spec_io import SpecError, load_spec
from .tensor import Tensor, cyclic_sum

# structure check -> spec field it implicates
FIELD_OF_CHECK = {
    "phi_xi_zero": "phi",
    "phi_squared": "phi",
    "eta_phi_zero": "eta",
    "eta_xi_one": "eta",
    "metric_compatibility": "metric",
    "metric_symmetric": "metric",
    "eta_dual_to_xi": "eta",
    "bracket_antisymmetry": "brackets",
    "signature": "metric",
    "jacobi": "brackets",
}

RANDOM_INSTANCES = 5


class InputError(Exception):
    pass


def components(t: Tensor) -> list[dict[str, Any]]:
    return [{"index": [i + 1 for i in idx], "value": x.render()} for idx, x in t.nonzero()]


def _parse_bindings(items: Sequence[str]) -> dict:
    out = {}
    for item in items or ():
        name, sep, value = item.partition("=")
        if not sep or not name.strip():
            raise InputError(f"--bind: expected name=rational, got {item!r}")
        try:
            out[name.strip()] = to_rational(value)
        except StructureError as exc:
            raise InputError(f"--bind {name.strip()}: {exc}") from None
    return out


def _load_model(args) -> AlgebraModel:
    if not args.input:
        raise InputError("--input is required for this command")
    try:
        m = load_spec(args.input)
    except SpecError as exc:
        raise InputError(str(exc)) from None
    bindings = _parse_bindings(args.bind)
    unknown = sorted(set(bindings) - set(m.params))
    if unknown:
        raise InputError(f"--bind: unknown parameter(s) {', '.join(unknown)}")
    return m.bind(bindings) if bindings else m


def _structure(m: AlgebraModel) -> Report:
    rep = validate_structure(m)
    rep.extend(jacobi_check(m))
    return rep


def _metric_entries(m: AlgebraModel, a: int, b: int) -> list[str]:
    """Metric entries read by g(phi e_a, phi e_b) = -g(e_a, e_b) + eta(e_a) eta(e_b)."""
    pairs = {(a, b)}
    pairs.update((p, q) for p in range(m.dim) for q in range(m.dim) if m.phi[p, a] and m.phi[q, b])
    return [f"metric[{p + 1}][{q + 1}]" for p, q in sorted(pairs)]


def _structure_error(rep: Report, m: AlgebraModel) -> str:
    lines = []
    for c in rep.failures():
        field = FIELD_OF_CHECK.get(c.name, c.name)
        where = f" at {tuple(i + 1 for i in c.witness)}" if c.witness else ""
        if c.name == "metric_compatibility" and c.witness:
            field = " or ".join(_metric_entries(m, *c.witness))
        elif c.name == "metric_symmetric" and c.witness:
            a, b = (i + 1 for i in c.witness)
            field = f"metric[{a}][{b}]"
        lines.append(f"{field}: structure check {c.name} fails{where} {c.detail}".rstrip())
    return "; ".join(lines)


def _require_valid(m: AlgebraModel) -> None:
    rep = _structure(m)
    if not rep.ok:
        raise InputError(_structure_error(rep, m))


# -- commands ----------------------------------------------------------


def cmd_validate(args) -> tuple[dict, int]:
    m = _load_model(args)
    rep = _structure(m)
    out = {"command": "validate", **rep.to_dict()}
    if not rep.ok:
        out["error"] = _structure_error(rep, m)
        return out, 2
    return out, 0


def cmd_classify(args) -> tuple[dict, int]:
    m = _load_model(args)
    _require_valid(m)
    cr = classify(m)
    return {"command": "classify", "ok": True, "classification": cr.to_dict(), "checks": []}, 0


def cmd_connection(args) -> tuple[dict, int]:
    m = _load_model(args)
    _require_valid(m)
    lc = levi_civita(m)
    rep = Report("connection")
    if args.connection == "lc":
        conn = lc
        rep.add(vanishes("metric_parallel", covariant_derivative(m, lc, m.g)))
        rep.add(identity("torsion_free", lc.gamma - lc.gamma.transpose(0, 2, 1), m.c))
    else:
        conn = pc.phib(m, lc)
        rep.extend(pc.naturality(m, conn))
        Q = pc.potential_Q(m, lc, conn)
        rep.extend(pc.q_conditions(m, Q, fundamental_F(m, lc)))
        if classify(m).u:
            rep.add(identity("U_form_agrees", conn.gamma, pc.phib_u_form(m, lc).gamma))
    out = {"command": "connection", "connection": args.connection, **rep.to_dict(),
           "gamma": components(conn.gamma)}
    return out, 0 if rep.ok else 1


def cmd_torsion(args) -> tuple[dict, int]:
    m = _load_model(args)
    _require_valid(m)
    lc = levi_civita(m)
    rep = Report("torsion")
    if args.connection == "lc":
        t13 = lc.gamma - lc.gamma.transpose(0, 2, 1) - m.c
        rep.add(vanishes("torsion_free", t13))
        return {"command": "torsion", "connection": "lc", **rep.to_dict(), "T": []}, 0 if rep.ok else 1
    ta = pc.torsion(m, pc.phib(m, lc), lc)
    rep.checks.extend(ta.checks)
    cr = classify(m)
    if cr.u1 or cr.u2:
        rep.extend(pc.u3_torsion_properties(m, ta.T, lc))
    out = {
        "command": "torsion",
        "connection": "phib",
        **rep.to_dict(),
        "T": components(ta.T),
        "forms": {"t": components(ta.t), "t_star": components(ta.t_star), "t_hat": components(ta.t_hat)},
        "classes": {name: c.to_dict() for name, c in ta.class_verdicts.items()},
    }
    return out, 0 if rep.ok else 1


def cmd_curvature(args) -> tuple[dict, int]:
    m = _load_model(args)
    _require_valid(m)
    lc = levi_civita(m)
    R = riemann(m, lc)
    rep = Report("curvature")
    if args.connection == "lc":
        sc = scalar_curvatures(m, R, lc)
        rep.add(identity("antisymmetric_xy", R, -R.transpose(1, 0, 2, 3)))
        rep.add(identity("antisymmetric_zw", R, -R.transpose(0, 1, 3, 2)))
        rep.add(vanishes("first_bianchi", cyclic_sum(R)))
        out = {"command": "curvature", "connection": "lc", **rep.to_dict(),
               "R": components(R), "tau": sc.tau.render(), "tau_star": sc.tau_star.render(),
               "rho": components(sc.rho), "norm_nabla_xi": sc.norm_nabla_xi.render()}
        return out, 0 if rep.ok else 1
    ca = cv.r_prime(m, pc.phib(m, lc), lc)
    rep.checks.extend(ca.checks)
    cr = classify(m)
    if cr.u:
        rep.extend(cv.r_prime_u_identity(m, R, lc, ca))
    if cr.u1:
        rep.extend(cv.r_xi_u3_check(m, R, lc))
    out = {"command": "curvature", "connection": "phib", **rep.to_dict(),
           "R_prime": components(ca.R_prime), "tau_prime": ca.tau_prime.render(),
           "tau_prime_star": ca.tau_prime_star.render(),
           "kaehler_flags": dict(ca.kaehler_flags._asdict())}
    return out, 0 if rep.ok else 1


def cmd_verify_example(args) -> tuple[dict, int]:
    bindings = _parse_bindings(args.bind)
    unknown = sorted(set(bindings) - set(PARAMS))
    if unknown:
        raise InputError(f"--bind: unknown parameter(s) {', '.join(unknown)}")
    p = ExampleParams.from_bindings(bindings)
    rep = verify_paper_claims(p)
    out = {"command": "verify-example",
           "bindings": {k: format_rational(v) for k, v in sorted(bindings.items())}}
    if args.seed is not None:
        rng = random.Random(args.seed)
        draws = [ExampleParams.random(rng) for _ in range(RANDOM_INSTANCES)]
        runs = [verify_paper_claims(q) for q in draws]
        for base in list(rep.checks):
            bad = [k for k, r in enumerate(runs) if not r[base.name].passed]
            rep.add(Check(f"random.{base.name}", not bad, None,
                          f"{RANDOM_INSTANCES - len(bad)}/{RANDOM_INSTANCES} instances pass"))
        out["seed"] = args.seed
    out.update(rep.to_dict())
    return out, 0 if rep.ok else 1


COMMANDS = {
    "validate": cmd_validate,
    "classify": cmd_classify,
    "connection": cmd_connection,
    "torsion": cmd_torsion,
    "curvature": cmd_curvature,
    "verify-example": cmd_verify_example,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bmetric",
        description="Exact geometry of almost contact B-metric Lie algebras.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--format", choices=("json", "text"), default="text")
        sp.add_argument("--bind", action="append", default=[], metavar="NAME=RATIONAL")
        sp.add_argument("--seed", type=int, default=None)
        if name != "verify-example":
            sp.add_argument("--input", metavar="PATH")
        if name in ("connection", "torsion", "curvature"):
            sp.add_argument("--connection", choices=("lc", "phib"), default="phib")
    return parser


def render_text(out: dict) -> str:
    lines = [f"{out['command']}: {'ok' if out.get('ok') else 'FAILED'}"]
    checks = out.get("checks", [])
    width = max((len(c["name"]) for c in checks), default=0)
    for c in checks:
        line = f"  {c['verdict'].upper():4}  {c['name']:<{width}}"
        if "witness" in c:
            line += f"  at {tuple(c['witness'])}"
        if c.get("detail"):
            line += f"  {c['detail']}"
        lines.append(line.rstrip())
    for key, value in out.items():
        if key in ("command", "ok", "checks", "title"):
            continue
        if isinstance(value, list) and value and isinstance(value[0], dict) and "index" in value[0]:
            lines.append(f"{key}:")
            for comp in value:
                lines.append(f"  {key}{comp['index']} = {comp['value']}")
        elif isinstance(value, dict):
            lines.append(f"{key}:")
            for k, v in value.items():
                lines.append(f"  {k}: {json.dumps(v) if not isinstance(v, str) else v}")
        else:
            lines.append(f"{key}: {value if isinstance(value, str) else json.dumps(value)}")
    return "\n".join(lines)


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        with contextlib.redirect_stdout(stdout), contextlib.redirect_stderr(stderr):
            args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        out, code = COMMANDS[args.command](args)
    except InputError as exc:
        print(f"error: {exc}", file=stderr)
        return 2
    except ConsistencyError as exc:
        print(f"internal cross-check failed: {exc}", file=stderr)
        return 1
    if args.format == "json":
        stdout.write(json.dumps(out, indent=2) + "\n")
    else:
        stdout.write(render_text(out) + "\n")
    if code == 2 and "error" in out:
        print(f"error: {out['error']}", file=stderr)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
