"""Membership in F0, U = F4+..+F9 and its subclasses U1, U2, U3, plus the F4/F5/F6 split.

Every predicate is an exact identity quantified over all frame indices.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .manifold import (AlgebraModel, d_eta, fundamental_F, lee_forms,
                       levi_civita)
from .report import Check, identity, vanishes
from .tensor import Tensor

SUB_LABELS = ("F4", "F5", "F6", "mixed", "not-applicable")


@dataclass
class ClassReport:
    f0: bool
    u: bool
    u1: bool
    u2: bool
    u3: bool
    sub_label: str
    checks: list[Check] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def failed_identities(self) -> list[tuple[str, tuple[int, ...] | None]]:
        return [(c.name, c.witness) for c in self.checks if not c.passed]

    def to_dict(self) -> dict:
        return {
            "F0": self.f0,
            "U": self.u,
            "U1": self.u1,
            "U2": self.u2,
            "U3": self.u3,
            "sub_label": self.sub_label,
            "identities": [c.to_dict() for c in self.checks],
            "notes": list(self.notes),
        }


def f_on_xi(m: AlgebraModel, F: Tensor) -> Tensor:
    """F(x, y, xi) as a (0,2)-tensor."""
    return F.insert(2, m.xi)


def classify(m: AlgebraModel, F: Tensor | None = None) -> ClassReport:
    lc = levi_civita(m)
    if F is None:
        F = fundamental_F(m, lc)
    fx = f_on_xi(m, F)  # (x, y) -> F(x, y, xi)

    f0 = vanishes("F_zero", F)

    # F(x,y,z) = eta(y) F(x,z,xi) + eta(z) F(x,y,xi)
    rhs = m.eta.outer(fx).transpose(1, 0, 2) + fx.outer(m.eta)
    u_vertical = identity("U_vertical", F, rhs)
    u_xi = vanishes("U_F_xi_first", F.insert(0, m.xi))
    closed = vanishes("d_eta_zero", d_eta(m, lc))
    # F(x,y,xi) = -F(phi x, phi y, xi)
    anti = identity("F_xi_phi_anti", fx, -fx.apply(0, m.phi).apply(1, m.phi))
    sym = identity("F_xi_symmetric", fx, fx.transpose(1, 0))

    u = u_vertical.passed and u_xi.passed
    u1 = u and closed.passed
    u2 = u and anti.passed
    u3 = u and sym.passed and anti.passed

    notes = []
    if u3:
        theta, theta_star, _ = lee_forms(m, F)
        t0, ts0 = theta.is_zero(), theta_star.is_zero()
        if t0 and ts0:
            sub = "F6"
        elif ts0:
            sub = "F4"
        elif t0:
            sub = "F5"
        else:
            sub = "mixed"
    else:
        sub = "not-applicable"
    if u1 and not u3:
        notes.append("theta/theta* split is applied inside U3 only; "
                     "a U1 model outside U3 carries an F9 part these forms do not detect")

    return ClassReport(
        f0=f0.passed, u=u, u1=u1, u2=u2, u3=u3, sub_label=sub,
        checks=[f0, u_vertical, u_xi, closed, anti, sym], notes=notes,
    )
