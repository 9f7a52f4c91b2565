"""The phi-B connection, its potential Q, torsion, torsion forms and torsion classes."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .classification import classify
from .errors import ConsistencyError, PreconditionError
from .manifold import (AlgebraModel, Connection, compose, covariant_derivative,
                       d_eta, fundamental_F, lee_forms, levi_civita,
                       nabla_eta, nabla_phi, nabla_xi)
from .report import Check, Report, identity, vanishes
from .tensor import CO, CONTRA, Tensor, contract, cyclic_sum

__all__ = [
    "TorsionAnalysis", "phib", "phib_u_form", "potential_Q", "naturality",
    "q_conditions", "torsion", "torsion_from_F", "torsion_class_check",
    "u3_torsion_properties", "nabla_xi_commutes_with_phi", "covariant_derivative",
]

HALF = Fraction(1, 2)


def phib(m: AlgebraModel, lc: Connection | None = None) -> Connection:
    """nabla'_x y = nabla_x y + 1/2 {(nabla_x phi) phi y + (nabla_x eta)(y) xi} - eta(y) nabla_x xi."""
    lc = lc or levi_civita(m)
    twisted = nabla_phi(m, lc).apply(2, m.phi).transpose(1, 0, 2)  # (k, i, j)
    vertical = m.xi.outer(nabla_eta(m, lc))
    shift = nabla_xi(m, lc).outer(m.eta)
    return Connection(lc.gamma + (twisted + vertical) * HALF - shift)


def phib_u_form(m: AlgebraModel, lc: Connection | None = None) -> Connection:
    """The simplified form valid on U: nabla_x y + (nabla_x eta)(y) xi - eta(y) nabla_x xi."""
    report = classify(m)
    if not report.u:
        raise PreconditionError("model is not in U", report)
    lc = lc or levi_civita(m)
    return Connection(lc.gamma + m.xi.outer(nabla_eta(m, lc)) - nabla_xi(m, lc).outer(m.eta))


def potential_Q(m: AlgebraModel, lc: Connection, np: Connection) -> Tensor:
    """Q(x, y, z) = g(nabla'_x y - nabla_x y, z)."""
    return (np.gamma - lc.gamma).transpose(1, 2, 0).lower(2, m.g)


def naturality(m: AlgebraModel, conn: Connection) -> Report:
    rep = Report("naturality")
    for name, t in (("phi", m.phi), ("xi", m.xi), ("eta", m.eta), ("g", m.g)):
        rep.add(vanishes(f"parallel_{name}", covariant_derivative(m, conn, t)))
    return rep


def q_conditions(m: AlgebraModel, Q: Tensor, F: Tensor) -> Report:
    """Q(x,y,phi z) - Q(x,phi y,z) = F(x,y,z) and Q(x,y,z) = -Q(x,z,y)."""
    rep = Report("potential")
    rep.add(identity("Q_phi_gives_F", Q.apply(2, m.phi) - Q.apply(1, m.phi), F))
    rep.add(identity("Q_skew", Q, -Q.transpose(0, 2, 1)))
    return rep


def torsion_from_F(m: AlgebraModel, F: Tensor) -> Tensor:
    """Closed form of the phi-B torsion in terms of F, valid on every model."""
    fx = F.insert(2, m.xi)
    A = F.apply(1, m.phi).apply(2, m.phi2)  # F(x, phi y, phi^2 z)
    B = fx.apply(1, m.phi)  # F(x, phi z, xi), indexed (x, z)
    horizontal = (A - A.transpose(1, 0, 2)) * (-HALF)
    eB = m.eta.outer(B)
    return horizontal + eB - eB.transpose(1, 0, 2) + (B - B.transpose(1, 0)).outer(m.eta)


def torsion_u_form(m: AlgebraModel, F: Tensor, lc: Connection) -> Tensor:
    """On U: T(x,y,z) = eta(x)F(y,phi z,xi) - eta(y)F(x,phi z,xi) + eta(z) d eta(x,y)."""
    B = F.insert(2, m.xi).apply(1, m.phi)
    eB = m.eta.outer(B)
    return eB - eB.transpose(1, 0, 2) + d_eta(m, lc).outer(m.eta)


@dataclass
class TorsionAnalysis:
    T: Tensor
    t: Tensor
    t_star: Tensor
    t_hat: Tensor
    class_verdicts: dict[str, Check]
    checks: list[Check] = field(default_factory=list)


def torsion_forms(m: AlgebraModel, T: Tensor) -> tuple[Tensor, Tensor, Tensor]:
    t = contract(T, 1, 2, m.ginv)
    t_star = contract(T.apply(2, m.phi), 1, 2, m.ginv)
    t_hat = T.insert(2, m.xi).insert(1, m.xi)
    return t, t_star, t_hat


def torsion(m: AlgebraModel, np: Connection, lc: Connection | None = None) -> TorsionAnalysis:
    """Torsion T(x,y) = nabla'_x y - nabla'_y x - [x,y], lowered with g.

    The result is cross-checked against the closed form in F (and, on U,
    against the simplified form); any disagreement raises ConsistencyError.
    """
    lc = lc or levi_civita(m)
    gam = np.gamma
    t13 = gam - gam.transpose(0, 2, 1) - m.c  # (k, i, j)
    T = t13.transpose(1, 2, 0).lower(2, m.g)

    F = fundamental_F(m, lc)
    closed = identity("torsion_closed_form", T, torsion_from_F(m, F))
    if not closed.passed:
        raise ConsistencyError(f"torsion disagrees with its closed form at {closed.witness}: {closed.detail}")
    checks = [closed]

    t, t_star, t_hat = torsion_forms(m, T)
    theta, theta_star, omega = lee_forms(m, F)
    th_xi = theta.insert(0, m.xi).value()
    ths_xi = theta_star.insert(0, m.xi).value()
    # expanding the closed form leaves omega terms next to the Lee forms; they vanish on U
    omega_phi = omega.apply(0, m.phi)
    checks.append(identity("t_from_theta_star", t, (theta_star + m.eta * ths_xi) * HALF - omega_phi))
    checks.append(identity("t_star_from_theta", t_star, (theta + m.eta * th_xi - omega) * (-HALF)))
    checks.append(identity("t_hat_from_omega", t_hat, -omega_phi))

    if classify(m, F).u:
        u_form = identity("torsion_U_form", T, torsion_u_form(m, F, lc))
        if not u_form.passed:
            raise ConsistencyError(f"torsion disagrees with its U form at {u_form.witness}: {u_form.detail}")
        checks.append(u_form)
        checks.append(identity("U_t", t, m.eta * ths_xi))
        checks.append(identity("U_t_star", t_star, m.eta * (-th_xi)))
        checks.append(vanishes("U_t_hat", t_hat))

    return TorsionAnalysis(T, t, t_star, t_hat, torsion_class_check(m, T), checks)


def _all_pass(name: str, checks: list[Check]) -> Check:
    for c in checks:
        if not c.passed:
            return Check(name, False, c.witness, f"{c.name}: {c.detail}")
    return Check(name, True)


def torsion_class_check(m: AlgebraModel, T: Tensor) -> dict[str, Check]:
    """Defining identities of the torsion classes T12 .. T41 and the U-family sums.

    Each entry is one exact identity set over all indices.  Sums of classes
    are decided by identities common to all their summands:

    * ``U``:  the vertical structure alone;
    * ``U1`` (T31+T33): vertical structure, T(x,y,xi) = 0, T(xi,y,z) = T(xi,z,y);
    * ``U2`` (T31+T32): vertical structure, T(x,y,xi) = 0, T(xi,phi y,phi z) = -T(xi,y,z);
    * ``U3`` (T31): the full T31 set.
    """
    phi, phi2, eta, xi = m.phi, m.phi2, m.eta, m.xi
    pp = lambda t, a, b: t.apply(a, phi).apply(b, phi)

    xi_first = T.insert(0, xi)  # T(xi, y, z)
    xi_last = T.insert(2, xi)  # T(x, y, xi)
    zero_xi_first = vanishes("T(xi,y,z)=0", xi_first)
    zero_xi_last = vanishes("T(x,y,xi)=0", xi_last)
    phi_pair = pp(T, 0, 1)  # T(phi x, phi y, z)

    # horizontal part: T(x,y,z) = eta(z) T(phi^2 x, phi^2 y, xi)
    s2 = xi_last.apply(0, phi2).apply(1, phi2)
    horizontal_xi = identity("T=eta(z)T(phi2x,phi2y,xi)", T, s2.outer(eta))

    # vertical part: T(x,y,z) = eta(x)S(y,z) - eta(y)S(x,z), S = T(xi, phi^2 y, phi^2 z)
    s3 = xi_first.apply(0, phi2).apply(1, phi2)
    es = eta.outer(s3)
    vertical_xi = identity("T=eta(x)S(y,z)-eta(y)S(x,z)", T, es - es.transpose(1, 0, 2))

    xs_sym = identity("T(xi,y,z)=T(xi,z,y)", xi_first, xi_first.transpose(1, 0))
    xs_skew = identity("T(xi,y,z)=-T(xi,z,y)", xi_first, -xi_first.transpose(1, 0))
    xs_phi_anti = identity("T(xi,y,z)=-T(xi,phiy,phiz)", xi_first, -pp(xi_first, 0, 1))
    xs_phi_inv = identity("T(xi,y,z)=T(xi,phiy,phiz)", xi_first, pp(xi_first, 0, 1))
    xl_phi_anti = identity("T(x,y,xi)=-T(phix,phiy,xi)", xi_last, -pp(xi_last, 0, 1))
    xl_phi_inv = identity("T(x,y,xi)=T(phix,phiy,xi)", xi_last, pp(xi_last, 0, 1))

    t_hat = T.insert(2, xi).insert(1, xi)
    ht = t_hat.outer(eta)  # (x, y) -> t_hat(x) eta(y)
    t41_rhs = (ht - ht.transpose(1, 0)).outer(eta)  # eta(z){eta(y)t_hat(x) - eta(x)t_hat(y)}

    es_full = eta.outer(xi_first)  # eta(x) T(xi, y, z)
    vertical = identity(
        "T_vertical_structure",
        T,
        es_full - es_full.transpose(1, 0, 2)
        + (xi_first - xi_first.transpose(1, 0)).outer(eta),
    )

    sets = {
        "T12": [zero_xi_first, zero_xi_last,
                identity("T=-T(phix,phiy,z)", T, -phi_pair),
                identity("T=T(phix,y,phiz)", T, pp(T, 0, 2))],
        "T13": [zero_xi_first, zero_xi_last,
                identity("T=T(phix,phiy,z)", T, phi_pair),
                vanishes("cyclic_T=0", cyclic_sum(T))],
        "T14": [zero_xi_first, zero_xi_last,
                identity("T=T(phix,phiy,z)", T, phi_pair),
                vanishes("cyclic_T(phix,y,z)=0", cyclic_sum(T.apply(0, phi)))],
        "T21": [horizontal_xi, xl_phi_anti],
        "T22": [horizontal_xi, xl_phi_inv],
        "T31": [vertical_xi, xs_sym, xs_phi_anti],
        "T32": [vertical_xi, xs_skew, xs_phi_anti],
        "T33": [vertical_xi, xs_sym, xs_phi_inv],
        "T34": [vertical_xi, xs_skew, xs_phi_inv],
        "T41": [identity("T=eta(z)(eta(y)that(x)-eta(x)that(y))", T, t41_rhs)],
        "U": [vertical],
        "U1": [vertical, zero_xi_last, xs_sym],
        "U2": [vertical, zero_xi_last, xs_phi_anti],
    }
    sets["U3"] = sets["T31"]
    return {name: _all_pass(name, checks) for name, checks in sets.items()}


def nabla_xi_commutes_with_phi(m: AlgebraModel, N: Tensor) -> Check:
    """nabla_{phi x} xi = phi nabla_x xi, with N the (1,1)-tensor x -> nabla_x xi."""
    return identity("nabla_phix_xi", N.apply(1, m.phi), compose(m.phi, N))


def u3_torsion_properties(m: AlgebraModel, T: Tensor, lc: Connection | None = None) -> Report:
    """Torsion identities of the subclasses: cyclic sum and Q = T(z,y,x) on U1,
    nabla_{phi x} xi = phi nabla_x xi on U2, and four phi-identities on U3."""
    report = classify(m)
    if not (report.u1 or report.u2):
        raise PreconditionError("model is in neither U1 nor U2", report)
    lc = lc or levi_civita(m)
    phi, xi, eta = m.phi, m.xi, m.eta
    rep = Report("torsion-identities")
    if report.u1:
        rep.add(vanishes("cyclic_T", cyclic_sum(T)))
        Q = potential_Q(m, lc, phib(m, lc))
        rep.add(identity("Q_equals_T_zyx", Q, T.transpose(2, 1, 0)))
    if report.u2:
        rep.add(nabla_xi_commutes_with_phi(m, nabla_xi(m, lc)))
    if report.u3:
        rep.add(vanishes("phi_sum_T", T.apply(0, phi) + T.apply(1, phi) - T.apply(2, phi)))
        rep.add(vanishes("phi_xz_T", T + T.apply(0, phi).apply(2, phi) + T.apply(1, phi).apply(2, phi)))
        tpp = T.apply(1, phi).apply(2, phi)
        rep.add(identity("phi_yz_symmetric", tpp, tpp.transpose(0, 2, 1)))
        tx = T.insert(1, xi)  # (x, z) -> T(x, xi, z)
        rhs = tx.outer(eta).transpose(0, 2, 1)  # eta(y) T(x, xi, z)
        rep.add(identity("T_yz_skew_part", T - T.transpose(0, 2, 1), rhs - rhs.transpose(0, 2, 1)))
    return rep
