"""Curvature of the phi-B connection and the phi-Kaehler-type conditions."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

from .classification import classify
from .connection import phib, potential_Q
from .errors import ConsistencyError, PreconditionError
from .manifold import (AlgebraModel, Connection, covariant_derivative,
                       double_trace, levi_civita, nabla_eta, nabla_xi,
                       riemann, scalar_curvatures)
from .report import Check, Report, identity, vanishes
from .scalar import Poly
from .tensor import Tensor, contract, cyclic_sum


class KaehlerFlags(NamedTuple):
    antisymmetric: bool  # L(x,y,z,w) = -L(y,x,z,w) = -L(x,y,w,z)
    cyclic: bool  # cyclic sum over x, y, z vanishes
    phi_anti_invariant: bool  # L(x,y,phi z,phi w) = -L(x,y,z,w)

    @property
    def kaehler_type(self) -> bool:
        return all(self)


@dataclass
class CurvatureAnalysis:
    R_prime: Tensor
    tau_prime: Poly
    tau_prime_star: Poly
    kaehler_flags: KaehlerFlags
    checks: list[Check] = field(default_factory=list)


def riemann_lc(m: AlgebraModel, lc: Connection | None = None) -> Tensor:
    return riemann(m, lc or levi_civita(m))


def kaehler_type_check(L: Tensor, m: AlgebraModel) -> KaehlerFlags:
    anti = (identity("", L, -L.transpose(1, 0, 2, 3)).passed
            and identity("", L, -L.transpose(0, 1, 3, 2)).passed)
    cyc = cyclic_sum(L).is_zero()
    phi_anti = identity("", L.apply(2, m.phi).apply(3, m.phi), -L).passed
    return KaehlerFlags(anti, cyc, phi_anti)


def _q_pair(m: AlgebraModel, Q: Tensor) -> Tensor:
    """P(x, y, z, w) = g(Q(x, z), Q(y, w))."""
    return contract(Q.outer(Q), 2, 5, m.ginv).transpose(0, 2, 1, 3)


def r_prime_from_Q(m: AlgebraModel, R: Tensor, lc: Connection, Q: Tensor) -> Tensor:
    """R + (nabla_x Q)(y,z,w) - (nabla_y Q)(x,z,w) + g(Q(x,z),Q(y,w)) - g(Q(y,z),Q(x,w))."""
    dQ = covariant_derivative(m, lc, Q)
    P = _q_pair(m, Q)
    return R + dQ - dQ.transpose(1, 0, 2, 3) + P - P.transpose(1, 0, 2, 3)


def r_prime(m: AlgebraModel, np: Connection | None = None, lc: Connection | None = None) -> CurvatureAnalysis:
    """Curvature of the phi-B connection, built twice and cross-checked."""
    lc = lc or levi_civita(m)
    np = np or phib(m, lc)
    Rp = riemann(m, np)
    via_q = identity("R_prime_via_Q", Rp, r_prime_from_Q(m, riemann(m, lc), lc, potential_Q(m, lc, np)))
    if not via_q.passed:
        raise ConsistencyError(f"curvature constructions disagree at {via_q.witness}: {via_q.detail}")
    tau_p, tau_p_star = double_trace(m, Rp)
    return CurvatureAnalysis(Rp, tau_p, tau_p_star, kaehler_type_check(Rp, m), [via_q])


def r_prime_u_identity(m: AlgebraModel, R: Tensor, lc: Connection, analysis: CurvatureAnalysis) -> Report:
    """On U: R' = R(x,y,phi^2 z,phi^2 w) - (nabla_x eta)z (nabla_y eta)w + (nabla_y eta)z (nabla_x eta)w
    and tau' = tau - 2 rho(xi,xi) - |nabla xi|^2."""
    report = classify(m)
    if not report.u:
        raise PreconditionError("model is not in U", report)
    ne = nabla_eta(m, lc)
    pair = ne.outer(ne).transpose(0, 2, 1, 3)  # (nabla_x eta)z (nabla_y eta)w
    rhs = R.apply(2, m.phi2).apply(3, m.phi2) - pair + pair.transpose(1, 0, 2, 3)
    rep = Report("curvature-U")
    rep.add(identity("R_prime_U_form", analysis.R_prime, rhs))
    sc = scalar_curvatures(m, R, lc)
    rho_xi = sc.rho.insert(0, m.xi).insert(0, m.xi).value()
    expected = sc.tau - rho_xi * 2 - sc.norm_nabla_xi
    diff = analysis.tau_prime - expected
    rep.add(Check("scalar_curvature_identity", diff.is_zero(), None if not diff else (),
                  "" if not diff else f"tau' - (tau - 2 rho(xi,xi) - |nabla xi|^2) = {diff}"))
    # expanding the U form of R' also produces (div xi)^2 = theta*(xi)^2, zero on F6
    div_xi = contract(nabla_eta(m, lc), 0, 1, m.ginv).value()
    rest = diff - div_xi * div_xi
    rep.add(Check("scalar_curvature_identity_with_trace", rest.is_zero(), None if not rest else (),
                  "" if not rest else f"residual = {rest}"))
    return rep


def r_xi_u3_check(m: AlgebraModel, R: Tensor, lc: Connection) -> Report:
    """R(x,y,z,xi) = eta(x) g(nabla_y xi, nabla_z xi) - eta(y) g(nabla_x xi, nabla_z xi) on U1 models."""
    report = classify(m)
    if not report.u1:
        raise PreconditionError("model is not in U1", report)
    N = nabla_xi(m, lc)
    G = contract(N.lower(0, m.g).outer(N), 0, 2)  # (y, z) -> g(nabla_y xi, nabla_z xi)
    eg = m.eta.outer(G)
    rep = Report("curvature-U1")
    holds = rep.add(identity("R_xi_formula", R.insert(3, m.xi), eg - eg.transpose(1, 0, 2)))
    rep.add(Check("R_xi_formula_iff_U3", holds.passed == report.u3, None,
                  f"R_xi_formula={holds.passed} U3={report.u3}"))
    if report.u3:
        rp = r_prime(m, phib(m, lc), lc).R_prime
        rep.add(vanishes("cyclic_R_prime", cyclic_sum(rp)))
    return rep
