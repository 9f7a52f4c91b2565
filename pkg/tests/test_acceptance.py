"""Acceptance suite: one exact check per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v``; the summary lines are
repeated in the "acceptance criteria" section at the end of the run.
"""

import io
import json
import random
from pathlib import Path

import pytest

from bmetric import connection as pc
from bmetric import curvature as cv
from bmetric.classification import classify
from bmetric.cli import run
from bmetric.example import (ExampleParams, build_example, published_nabla_xi,
                             published_phib, published_torsion,
                             structure_checks)
from bmetric.manifold import (covariant_derivative, fundamental_F,
                              levi_civita, nabla_xi, riemann,
                              scalar_curvatures)
from bmetric.report import identity
from bmetric.scalar import Poly
from bmetric.tensor import first_difference

from helpers import abelian

SPEC = Path(__file__).resolve().parent.parent / "data" / "ex.json"
RANDOM_BINDINGS = 100
ORACLE_BINDINGS = 10


@pytest.fixture(scope="module")
def ex():
    m = build_example()
    lc = levi_civita(m)
    nb = pc.phib(m, lc)
    ta = pc.torsion(m, nb, lc)
    return m, lc, nb, ta


def _where(idx):
    return None if idx is None else tuple(i + 1 for i in idx)


def test_criterion_01_structure(verdict):
    rep = structure_checks()
    verdict(1, "structure axioms and Jacobi, symbolic", rep.ok,
            ", ".join(c.name for c in rep.failures()))


def test_criterion_02_levi_civita(verdict, ex):
    m, lc, _, _ = ex
    where = first_difference(nabla_xi(m, lc), published_nabla_xi())
    verdict(2, "nabla_{e_i} xi equals the published vectors", where is None, f"first difference {_where(where)}" if where else "")


def test_criterion_03_classification(verdict):
    r = classify(build_example())
    a = classify(abelian())
    ok = r.u and r.u1 and r.u2 and r.u3 and r.sub_label == "F6" and a.f0
    verdict(3, "example in U, U1, U2, U3 with label F6; abelian model in F0", ok,
            f"sub_label={r.sub_label}, abelian f0={a.f0}")


def test_criterion_04_phib(verdict, ex):
    _, _, nb, _ = ex
    where = first_difference(nb.gamma, published_phib())
    verdict(4, "phi-B connection equals the published components, zero elsewhere", where is None,
            f"first difference {_where(where)}" if where else "")


def test_criterion_05_torsion(verdict, ex):
    _, _, _, ta = ex
    where = first_difference(ta.T, published_torsion())
    forms_zero = ta.t.is_zero() and ta.t_star.is_zero() and ta.t_hat.is_zero()
    verdict(5, "torsion equals the published table; t, t*, t-hat vanish", where is None and forms_zero,
            f"first difference {_where(where)}" if where else "")


def test_criterion_06_flat(verdict, ex):
    m, lc, nb, _ = ex
    Rp = cv.r_prime(m, nb, lc).R_prime
    nz = next((i for i, _ in Rp.nonzero()), None)
    verdict(6, "R' = 0", nz is None, f"non-zero at {_where(nz)}" if nz else "")


def test_criterion_07_parallel_torsion(verdict, ex):
    m, _, nb, ta = ex
    dT = covariant_derivative(m, nb, ta.T)
    nonzero = list(dT.nonzero())
    detail = ""
    if nonzero:
        idx, value = nonzero[0]
        detail = f"{len(nonzero)} non-zero components, e.g. {_where(idx)} = {value}"
    verdict(7, "phi-B derivative of the torsion vanishes", not nonzero, detail)


def test_criterion_08_scalar_identity(verdict, ex):
    m, lc, _, _ = ex
    sc = scalar_curvatures(m, riemann(m, lc), lc)
    rho_xi = sc.rho.insert(0, m.xi).insert(0, m.xi).value()
    value = sc.tau - rho_xi * 2 - sc.norm_nabla_xi
    verdict(8, "tau - 2 rho(xi,xi) - |nabla xi|^2 = 0", value.is_zero(), f"value = {value}" if value else "")


def _natural_and_Q(m):
    lc = levi_civita(m)
    nb = pc.phib(m, lc)
    rep = pc.naturality(m, nb)
    rep.extend(pc.q_conditions(m, pc.potential_Q(m, lc, nb), fundamental_F(m, lc)))
    return rep


def test_criterion_09_naturality(verdict):
    failures = []
    if not _natural_and_Q(build_example()).ok:
        failures.append("symbolic")
    rng = random.Random(20240901)
    for k in range(RANDOM_BINDINGS):
        rep = _natural_and_Q(build_example(ExampleParams.random(rng)))
        if not rep.ok:
            failures.append(f"instance {k}: {rep.failures()[0].name}")
    verdict(9, f"naturality and Q identities, symbolic and {RANDOM_BINDINGS} seeded bindings", not failures,
            "; ".join(failures[:3]))


def test_criterion_10_torsion_identities(verdict, ex):
    m, lc, _, ta = ex
    suite = pc.u3_torsion_properties(m, ta.T, lc)
    classes = pc.torsion_class_check(m, ta.T)
    problems = [c.name for c in suite.failures()]
    problems += [name for name in ("U", "U1", "U2", "T31") if not classes[name].passed]

    # every identity must catch one perturbed component and name a witness
    one = Poly.const(m.params, 1)
    bad_T = ta.T.replace((0, 1, 2), ta.T[0, 1, 2] + one)
    mutated = pc.u3_torsion_properties(m, bad_T, lc)
    for c in suite.checks:
        if c.name == "nabla_phix_xi":
            continue
        mc = mutated[c.name]
        if mc.passed or mc.witness is None:
            problems.append(f"mutation not caught by {c.name}")
    bad_classes = pc.torsion_class_check(m, bad_T)
    for name in ("U", "T31"):
        if bad_classes[name].passed or bad_classes[name].witness is None:
            problems.append(f"mutation not caught by {name}")
    N = nabla_xi(m, lc)
    bad_N = pc.nabla_xi_commutes_with_phi(m, N.replace((0, 0), N[0, 0] + one))
    if bad_N.passed or bad_N.witness is None:
        problems.append("mutation not caught by nabla_phix_xi")
    verdict(10, "torsion identity suite plus one mutation test per identity", not problems, "; ".join(problems))


def test_criterion_11_curvature_identities(verdict, ex):
    m, lc, nb, _ = ex
    R = riemann(m, lc)
    ca = cv.r_prime(m, nb, lc)
    parts = {
        "both constructions of R'": ca.checks[0].passed,
        "R' in terms of R on U": cv.r_prime_u_identity(m, R, lc, ca)["R_prime_U_form"].passed,
        "phi-Kaehler-type flags": ca.kaehler_flags.kaehler_type,
    }
    r_xi = cv.r_xi_u3_check(m, R, lc)["R_xi_formula"]
    parts["R(x,y,z,xi) formula"] = r_xi.passed
    failed = [name for name, ok in parts.items() if not ok]
    detail = ""
    if failed:
        detail = "failing: " + ", ".join(failed)
        if not r_xi.passed:
            detail += f"; R(x,y,z,xi) witness {_where(r_xi.witness)}, {r_xi.detail}"
    verdict(11, "curvature identity suite", not failed, detail)


def test_criterion_12_oracle_equivalence(verdict):
    rng = random.Random(7)
    instances = [ExampleParams()] + [ExampleParams.random(rng) for _ in range(ORACLE_BINDINGS)]
    problems = []
    for k, p in enumerate(instances):
        m = build_example(p)
        lc = levi_civita(m)
        nb = pc.phib(m, lc)
        try:
            ta = pc.torsion(m, nb, lc)  # raises when the two torsion constructions differ
            ca = cv.r_prime(m, nb, lc)  # raises when the two curvature constructions differ
        except Exception as exc:  # report, do not hide, a broken cross-check
            problems.append(f"instance {k}: {exc}")
            continue
        direct = identity("torsion", ta.T, pc.torsion_from_F(m, fundamental_F(m, lc)))
        via_q = identity("curvature", ca.R_prime,
                         cv.r_prime_from_Q(m, riemann(m, lc), lc, pc.potential_Q(m, lc, nb)))
        for c in (direct, via_q):
            if not c.passed:
                problems.append(f"instance {k}: {c.name} at {_where(c.witness)}")
    verdict(12, f"torsion and R' agree between constructions, symbolic and {ORACLE_BINDINGS} bindings",
            not problems, "; ".join(problems[:3]))


def _cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    return run(list(argv), stdout=out, stderr=err), out.getvalue(), err.getvalue()


def test_criterion_13_cli_contract(verdict, tmp_path):
    code1, out1, _ = _cli("verify-example", "--format", "json")
    code2, out2, _ = _cli("verify-example", "--format", "json")
    data = json.loads(SPEC.read_text())
    data["metric"][2][2] = "1"
    bad = tmp_path / "corrupt.json"
    bad.write_text(json.dumps(data))
    code3, _, err3 = _cli("validate", "--input", str(bad))

    parts = {
        "verify-example exits 0": code1 == 0,
        "byte-deterministic output": out1 == out2 and code1 == code2,
        "corrupt metric exits 2 naming metric[3][3]": code3 == 2 and "metric[3][3]" in err3,
    }
    failed = [name for name, ok in parts.items() if not ok]
    detail = ""
    if failed:
        detail = "failing: " + ", ".join(failed)
        if code1 != 0:
            fails = [c["name"] for c in json.loads(out1)["checks"] if c["verdict"] == "fail"]
            detail += f"; verify-example exit {code1}, failing claims: {', '.join(fails)}"
    verdict(13, "CLI contract", not failed, detail)
