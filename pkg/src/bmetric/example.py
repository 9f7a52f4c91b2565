"""The five-dimensional F6 Lie group family and a verifier for its stated properties.

Basis ``e1..e5`` (0-based ``0..4``) with ``xi = e5``.  The only non-zero
brackets are ``[e_i, xi]`` for ``i <= 4``, which depend on six parameters
``l1, l2, l3, l4, m1, m3``; the span of ``e1..e4`` is an abelian ideal.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, fields
from fractions import Fraction
from typing import Mapping

from . import connection as pc
from . import curvature as cv
from .classification import classify
from .manifold import (AlgebraModel, covariant_derivative, jacobi_check,
                       levi_civita, nabla_eta, nabla_xi, validate_structure)
from .report import Check, Report, identity
from .scalar import Poly, parse_poly
from .tensor import CO, CONTRA, Tensor

PARAMS = ("l1", "l2", "l3", "l4", "m1", "m3")

# [e_i, xi] for i = 1..4, as coefficient strings of e1..e4
BRACKETS_WITH_XI = (
    ("l1", "l2", "l3", "l4"),
    ("m1", "-l1", "m3", "-l3"),
    ("-l3", "-l4", "l1", "l2"),
    ("-m3", "l3", "m1", "-l1"),
)

METRIC_DIAGONAL = (1, 1, -1, -1, 1)

# phi e1 = e3, phi e2 = e4, phi e3 = -e1, phi e4 = -e2, phi e5 = 0
PHI_IMAGES = {0: (2, 1), 1: (3, 1), 2: (0, -1), 3: (1, -1)}

# Published nabla_{e_i} xi, coefficients of e1..e4
NABLA_XI_PUBLISHED = (
    ("l1", "1/2*(l2+m1)", "l3", "1/2*(l4+m3)"),
    ("1/2*(l2+m1)", "-l1", "1/2*(l4+m3)", "-l3"),
    ("-l3", "-1/2*(l4+m3)", "l1", "1/2*(l2+m1)"),
    ("-1/2*(l4+m3)", "l3", "1/2*(l2+m1)", "-l1"),
)

# Published non-zero nabla'_xi e_i, coefficients of e1..e4
PHIB_XI_PUBLISHED = (
    ("0", "-1/2*(l2-m1)", "0", "-1/2*(l4-m3)"),
    ("1/2*(l2-m1)", "0", "1/2*(l4-m3)", "0"),
    ("0", "1/2*(l4-m3)", "0", "-1/2*(l2-m1)"),
    ("-1/2*(l4-m3)", "0", "1/2*(l2-m1)", "0"),
)

# Published T(xi, e_i, e_j) for i, j = 1..4, grouped by common value
TORSION_PUBLISHED = (
    ("l1", {(1, 1): 1, (2, 2): -1, (3, 3): -1, (4, 4): 1}),
    ("1/2*(l2+m1)", {(1, 2): 1, (2, 1): 1, (3, 4): -1, (4, 3): -1}),
    ("-l3", {(1, 3): 1, (2, 4): -1, (3, 1): 1, (4, 2): -1}),
    ("-1/2*(l4+m3)", {(1, 4): 1, (2, 3): 1, (3, 2): 1, (4, 1): 1}),
)

XI = 4


@dataclass(frozen=True)
class ExampleParams:
    """Each parameter is symbolic (None) or bound to a rational."""

    l1: Fraction | None = None
    l2: Fraction | None = None
    l3: Fraction | None = None
    l4: Fraction | None = None
    m1: Fraction | None = None
    m3: Fraction | None = None

    def bindings(self) -> dict[str, Fraction]:
        return {f.name: Fraction(getattr(self, f.name)) for f in fields(self)
                if getattr(self, f.name) is not None}

    @classmethod
    def from_bindings(cls, bindings: Mapping[str, Fraction]) -> "ExampleParams":
        return cls(**{k: Fraction(v) for k, v in bindings.items()})

    @classmethod
    def random(cls, rng: random.Random, span: int = 9) -> "ExampleParams":
        def draw():
            return Fraction(rng.randint(-span, span), rng.randint(1, span))

        return cls(*(draw() for _ in PARAMS))


def _published(text: str, p: ExampleParams) -> Poly:
    return parse_poly(text, PARAMS).bind(p.bindings())


def build_example(p: ExampleParams = ExampleParams()) -> AlgebraModel:
    brackets = {}
    for i, row in enumerate(BRACKETS_WITH_XI):
        brackets[(i, XI)] = {k: _published(text, p) for k, text in enumerate(row)}
    dim = 5
    g = [[METRIC_DIAGONAL[i] if i == j else 0 for j in range(dim)] for i in range(dim)]
    phi = [[0] * dim for _ in range(dim)]
    for src, (dst, sign) in PHI_IMAGES.items():
        phi[dst][src] = sign
    xi = [int(i == XI) for i in range(dim)]
    return AlgebraModel.from_data(2, PARAMS, brackets, g, phi, xi, xi)


def published_nabla_xi(p: ExampleParams = ExampleParams()) -> Tensor:
    """(1,1)-tensor with column i the published nabla_{e_i} xi (column xi is zero)."""
    def fn(idx):
        k, i = idx
        if i == XI or k == XI:
            return 0
        return _published(NABLA_XI_PUBLISHED[i][k], p)

    return Tensor.build((CONTRA, CO), 5, PARAMS, fn)


def published_phib(p: ExampleParams = ExampleParams()) -> Tensor:
    """Published phi-B connection coefficients; everything off nabla'_xi vanishes."""
    def fn(idx):
        k, i, j = idx
        if i != XI or j == XI or k == XI:
            return 0
        return _published(PHIB_XI_PUBLISHED[j][k], p)

    return Tensor.build((CONTRA, CO, CO), 5, PARAMS, fn)


def published_torsion(p: ExampleParams = ExampleParams()) -> Tensor:
    """Full T(x, y, z) assembled from the published T(xi, e_i, e_j)."""
    t5 = {}
    for text, signs in TORSION_PUBLISHED:
        value = _published(text, p)
        for (i, j), s in signs.items():
            t5[(i - 1, j - 1)] = value * s
    zero = Poly.const(PARAMS, 0)
    eta = lambda a: int(a == XI)

    # vertical structure: T(x,y,z) = eta(x)T(xi,y,z) - eta(y)T(xi,x,z) + eta(z)(T(xi,x,y) - T(xi,y,x))
    def T5(a, b):
        return t5.get((a, b), zero)

    def fn(idx):
        x, y, z = idx
        return eta(x) * T5(y, z) - eta(y) * T5(x, z) + eta(z) * (T5(x, y) - T5(y, x))

    return Tensor.build((CO, CO, CO), 5, PARAMS, fn)


def verify_paper_claims(p: ExampleParams = ExampleParams()) -> Report:
    """One exact check per published property of the example family."""
    m = build_example(p)
    rep = Report("verify-example")

    cls_report = classify(m)
    f6 = cls_report.u3 and cls_report.sub_label == "F6"
    rep.add(Check("class_F6", f6, None,
                  f"u={cls_report.u} u1={cls_report.u1} u2={cls_report.u2} "
                  f"u3={cls_report.u3} sub_label={cls_report.sub_label}"))

    lc = levi_civita(m)
    rep.add(identity("levi_civita_nabla_xi", nabla_xi(m, lc), published_nabla_xi(p)))

    nb = pc.phib(m, lc)
    rep.add(identity("phib_components", nb.gamma, published_phib(p)))

    ta = pc.torsion(m, nb, lc)
    torsion_ok = identity("torsion_components", ta.T, published_torsion(p))
    # the published table is trusted only alongside T(xi, e_i, e_j) = (nabla_{e_i} eta) e_j
    route = identity("torsion_route", ta.T.insert(0, m.xi), nabla_eta(m, lc))
    if torsion_ok.passed and not route.passed:
        torsion_ok = Check("torsion_components", False, route.witness,
                           "matches the table but not the independent route: " + route.detail)
    rep.add(torsion_ok)

    ca = cv.r_prime(m, nb, lc)
    rep.add(Check("flat_phib", ca.R_prime.is_zero(),
                  next((i for i, _ in ca.R_prime.nonzero()), None)))

    dT = covariant_derivative(m, nb, ta.T)
    rep.add(Check("parallel_torsion", dT.is_zero(), next((i for i, _ in dT.nonzero()), None)))

    ident = cv.r_prime_u_identity(m, cv.riemann_lc(m, lc), lc, ca)
    rep.add(_merge("scalar_curvature_identity", [ident["scalar_curvature_identity"]]))

    suite = pc.u3_torsion_properties(m, ta.T)
    rep.add(_merge("torsion_identity_suites", suite.checks))
    return rep


def _merge(name: str, checks) -> Check:
    failed = [c for c in checks if not c.passed]
    if not failed:
        return Check(name, True, None, ", ".join(c.name for c in checks) if len(checks) > 1 else "")
    first = failed[0]
    return Check(name, False, first.witness, f"{first.name}: {first.detail}")


def structure_checks(p: ExampleParams = ExampleParams()) -> Report:
    m = build_example(p)
    rep = validate_structure(m)
    rep.extend(jacobi_check(m))
    return rep
