"""Almost contact B-metric Lie algebras and their Levi-Civita geometry.

Everything is expressed in a fixed basis ``e_0 .. e_{2n}`` of left-invariant
vector fields.  Tensor fields with constant frame components have vanishing
directional derivatives, so covariant derivatives and curvature reduce to
algebra on the structure constants and the connection coefficients.

Conventions:

* ``c[k, i, j]`` is the ``e_k`` component of ``[e_i, e_j]``.
* ``gamma[k, i, j]`` is the ``e_k`` component of ``nabla_{e_i} e_j``.
* ``R(x, y) z = nabla_x nabla_y z - nabla_y nabla_x z - nabla_[x,y] z`` and
  ``R(x, y, z, w) = g(R(x, y) z, w)``.
* ``rho(x, y) = g^{kl} R(e_k, x, y, e_l)`` so that ``tau = g^{ij} rho(e_i, e_j)``.
* ``d eta(x, y) = (nabla_x eta) y - (nabla_y eta) x`` (no factor 1/2).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Mapping, NamedTuple, Sequence

from .errors import StructureError
from .report import Check, Report, identity, vanishes
from .scalar import Number, Poly, to_rational
from .tensor import CO, CONTRA, Tensor, contract


def _invert(matrix: list[list[Fraction]]) -> list[list[Fraction]]:
    """Gauss-Jordan inverse over the rationals."""
    size = len(matrix)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(size)] for i, row in enumerate(matrix)]
    for col in range(size):
        pivot = next((r for r in range(col, size) if aug[r][col]), None)
        if pivot is None:
            raise StructureError("metric is not invertible")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        p = aug[col][col]
        aug[col] = [x / p for x in aug[col]]
        for r in range(size):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [row[size:] for row in aug]


def _charpoly(matrix: list[list[Fraction]]) -> list[Fraction]:
    """Coefficients of det(tI - A), highest degree first (Faddeev-LeVerrier)."""
    size = len(matrix)
    coeffs = [Fraction(1)]
    m = [[Fraction(0)] * size for _ in range(size)]
    for k in range(1, size + 1):
        # M_k = A M_{k-1} + c_{k-1} I
        m = [[sum((matrix[i][t] * m[t][j] for t in range(size)), Fraction(0))
              + (coeffs[-1] if i == j else 0) for j in range(size)] for i in range(size)]
        am = [[sum((matrix[i][t] * m[t][j] for t in range(size)), Fraction(0))
               for j in range(size)] for i in range(size)]
        coeffs.append(-sum((am[i][i] for i in range(size)), Fraction(0)) / k)
    return coeffs


def _sign_changes(seq: Sequence[Fraction]) -> int:
    signs = [x > 0 for x in seq if x]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def signature(g: list[list[Fraction]]) -> tuple[int, int, int]:
    """(negative, positive, zero) eigenvalue counts of a rational symmetric matrix.

    A symmetric matrix has only real eigenvalues, so Descartes' rule of signs
    on the characteristic polynomial counts positive roots exactly.
    """
    cp = _charpoly(g)
    size = len(g)
    zero = 0
    while zero < size and cp[size - zero] == 0:
        zero += 1
    trimmed = cp[: size + 1 - zero]
    pos = _sign_changes(trimmed)
    deg = len(trimmed) - 1
    neg = _sign_changes([c * (-1) ** (deg - i) for i, c in enumerate(trimmed)])
    return neg, pos, zero


@dataclass(frozen=True, eq=False)
class AlgebraModel:
    """A (2n+1)-dimensional Lie algebra with an almost contact B-metric structure.

    ``g``, ``phi``, ``xi`` and ``eta`` hold parameter-free rationals (as
    constant polynomials); only the structure constants may carry parameters.
    """

    n: int
    params: tuple[str, ...]
    c: Tensor
    g: Tensor
    phi: Tensor
    xi: Tensor
    eta: Tensor

    @classmethod
    def from_data(
        cls,
        n: int,
        params: Sequence[str],
        brackets: Mapping[tuple[int, int], Mapping[int, Poly | Number]],
        g: Sequence[Sequence[Number | str]],
        phi: Sequence[Sequence[Number | str]],
        xi: Sequence[Number | str],
        eta: Sequence[Number | str],
    ) -> "AlgebraModel":
        """Assemble a model from 0-based bracket data.

        ``brackets[(i, j)][k]`` is the ``e_k`` coefficient of ``[e_i, e_j]``;
        the ``(j, i)`` entry is filled in by antisymmetry.  ``phi[a][b]`` is
        the ``e_a`` component of ``phi(e_b)``.
        """
        params = tuple(sorted(params))
        dim = 2 * n + 1
        for name, rows in (("metric", g), ("phi", phi)):
            if len(rows) != dim or any(len(r) != dim for r in rows):
                raise StructureError(f"{name} must be {dim}x{dim}")
        for name, vec in (("xi", xi), ("eta", eta)):
            if len(vec) != dim:
                raise StructureError(f"{name} must have {dim} entries")

        def const(v):
            return Poly.const(params, to_rational(v))

        table: dict[tuple[int, int, int], Poly] = {}
        for (i, j), coeffs in brackets.items():
            if i == j:
                raise StructureError(f"bracket [e{i}, e{i}] must vanish")
            for k, v in coeffs.items():
                if not all(0 <= x < dim for x in (i, j, k)):
                    raise StructureError(f"bracket index out of range: {(i, j, k)}")
                v = v if isinstance(v, Poly) else const(v)
                if v.params != params:
                    raise StructureError(f"bracket {(i, j, k)} uses a different parameter set")
                for key, val in (((k, i, j), v), ((k, j, i), -v)):
                    if key in table and table[key] != val:
                        raise StructureError(f"inconsistent bracket entries for {(i, j, k)}")
                    table[key] = val
        c = Tensor.build((CONTRA, CO, CO), dim, params, lambda idx: table.get(idx, 0))
        return cls(
            n=n,
            params=params,
            c=c,
            g=Tensor.build((CO, CO), dim, params, lambda idx: const(g[idx[0]][idx[1]])),
            phi=Tensor.build((CONTRA, CO), dim, params, lambda idx: const(phi[idx[0]][idx[1]])),
            xi=Tensor.build((CONTRA,), dim, params, lambda idx: const(xi[idx[0]])),
            eta=Tensor.build((CO,), dim, params, lambda idx: const(eta[idx[0]])),
        )

    @property
    def dim(self) -> int:
        return 2 * self.n + 1

    def metric_matrix(self) -> list[list[Fraction]]:
        d = self.dim
        return [[self.g[i, j].constant_value() for j in range(d)] for i in range(d)]

    @cached_property
    def ginv(self) -> Tensor:
        inv = _invert(self.metric_matrix())
        return Tensor.build((CONTRA, CONTRA), self.dim, self.params, lambda idx: inv[idx[0]][idx[1]])

    @cached_property
    def phi2(self) -> Tensor:
        return compose(self.phi, self.phi)

    @cached_property
    def identity(self) -> Tensor:
        return Tensor.build((CONTRA, CO), self.dim, self.params, lambda idx: int(idx[0] == idx[1]))

    def bind(self, bindings: Mapping[str, Number]) -> "AlgebraModel":
        return AlgebraModel(self.n, self.params, self.c.bind(bindings), self.g, self.phi, self.xi, self.eta)

    def with_brackets(self, c: Tensor) -> "AlgebraModel":
        return AlgebraModel(self.n, self.params, c, self.g, self.phi, self.xi, self.eta)

    def rename(self, mapping: Mapping[str, str]) -> "AlgebraModel":
        def ren(t: Tensor) -> Tensor:
            data = [x.rename(mapping) for x in t.data]
            return Tensor(t.kinds, t.dim, data[0].params, data)

        params = tuple(sorted(mapping.get(p, p) for p in self.params))
        return AlgebraModel(self.n, params, ren(self.c), ren(self.g), ren(self.phi), ren(self.xi), ren(self.eta))


@dataclass(frozen=True, eq=False)
class Connection:
    gamma: Tensor  # kinds (CONTRA, CO, CO): gamma[k, i, j]

    def along(self, i: int, vector: Tensor) -> Tensor:
        """nabla_{e_i} of a constant-component vector."""
        g = self.gamma
        return Tensor.build((CONTRA,), g.dim, g.params,
                            lambda idx: sum((g[idx[0], i, j] * vector[j] for j in range(g.dim)),
                                            Poly.const(g.params, 0)))


def compose(a: Tensor, b: Tensor) -> Tensor:
    """(a o b) for two (1,1)-tensors."""
    return Tensor.build((CONTRA, CO), a.dim, a.params,
                        lambda idx: sum((a[idx[0], m] * b[m, idx[1]] for m in range(a.dim)),
                                        Poly.const(a.params, 0)))


def lowered_brackets(m: AlgebraModel) -> Tensor:
    """c(i, j, k) = g([e_i, e_j], e_k)."""
    return m.c.transpose(1, 2, 0).lower(2, m.g)


def validate_structure(m: AlgebraModel) -> Report:
    d = m.dim
    rep = Report("structure")
    zero_vec = Tensor.zeros((CONTRA,), d, m.params)
    phi_xi = Tensor.build((CONTRA,), d, m.params,
                          lambda idx: sum((m.phi[idx[0], j] * m.xi[j] for j in range(d)), Poly.const(m.params, 0)))
    rep.add(identity("phi_xi_zero", phi_xi, zero_vec))
    rep.add(identity("phi_squared", m.phi2, -m.identity + m.xi.outer(m.eta)))
    rep.add(vanishes("eta_phi_zero", m.eta.apply(0, m.phi)))
    eta_xi = m.eta.insert(0, m.xi).value()
    rep.add(Check("eta_xi_one", eta_xi == 1, None if eta_xi == 1 else (), f"eta(xi) = {eta_xi}"))
    rep.add(identity("metric_compatibility",
                     m.g.apply(0, m.phi).apply(1, m.phi),
                     -m.g + m.eta.outer(m.eta)))
    rep.add(identity("metric_symmetric", m.g, m.g.transpose(1, 0)))
    rep.add(identity("eta_dual_to_xi", m.g.insert(1, m.xi), m.eta))
    rep.add(identity("bracket_antisymmetry", m.c, -m.c.transpose(0, 2, 1)))
    neg, pos, zero = signature(m.metric_matrix())
    sig_ok = zero == 0 and (neg, pos) == (m.n, m.n + 1)
    rep.add(Check("signature", sig_ok, None if sig_ok else (),
                  f"(negative, positive, zero) = ({neg}, {pos}, {zero})"))
    return rep


def jacobi_check(m: AlgebraModel) -> Report:
    d = m.dim
    c = m.c
    zero = Poly.const(m.params, 0)

    def bracket_of_bracket(i, j, k, l):
        # e_l component of [[e_i, e_j], e_k]
        return sum((c[a, i, j] * c[l, a, k] for a in range(d)), zero)

    rep = Report("jacobi")
    for i in range(d):
        for j in range(i + 1, d):
            for k in range(j + 1, d):
                for l in range(d):
                    s = bracket_of_bracket(i, j, k, l) + bracket_of_bracket(j, k, i, l) \
                        + bracket_of_bracket(k, i, j, l)
                    if s:
                        rep.add(Check("jacobi", False, (i, j, k, l), f"cyclic sum = {s}"))
                        return rep
    rep.add(Check("jacobi", True))
    return rep


def levi_civita(m: AlgebraModel) -> Connection:
    """Koszul formula for left-invariant fields.

    2 g(nabla_x y, z) = g([x,y],z) - g([y,z],x) + g([z,x],y)
    """
    cl = lowered_brackets(m)
    half = Fraction(1, 2)
    low = Tensor.build((CO, CO, CO), m.dim, m.params,
                       lambda idx: (cl[idx] - cl[idx[1], idx[2], idx[0]] + cl[idx[2], idx[0], idx[1]]) * half)
    # low(i, j, k) = g(nabla_i e_j, e_k); raise k and move it to the front
    return Connection(low.raise_(2, m.ginv).transpose(2, 0, 1))


def covariant_derivative(m: AlgebraModel, conn: Connection, t: Tensor) -> Tensor:
    """nabla t for a tensor with constant frame components; the new slot comes first.

    Covariant slots pick up ``-Gamma^a_{i s} t(.., a, ..)``, contravariant
    slots ``+Gamma^s_{i a} t(.., a, ..)``.
    """
    gam = conn.gamma
    d = m.dim
    zero = Poly.const(t.params, 0)

    def fn(idx):
        i, rest = idx[0], idx[1:]
        total = zero
        for s, kind in enumerate(t.kinds):
            for a in range(d):
                coeff = -gam[a, i, rest[s]] if kind == CO else gam[rest[s], i, a]
                if coeff:
                    total = total + coeff * t[rest[:s] + (a,) + rest[s + 1:]]
        return total

    return Tensor.build((CO,) + t.kinds, d, t.params, fn)


def nabla_xi(m: AlgebraModel, conn: Connection) -> Tensor:
    """(1,1)-tensor whose column ``i`` is nabla_{e_i} xi."""
    return covariant_derivative(m, conn, m.xi).transpose(1, 0)


def nabla_eta(m: AlgebraModel, conn: Connection) -> Tensor:
    """(nabla_x eta) y as a (0,2)-tensor indexed (x, y)."""
    return covariant_derivative(m, conn, m.eta)


def nabla_phi(m: AlgebraModel, conn: Connection) -> Tensor:
    """(nabla_{e_i} phi) as a tensor indexed (i, k, j): e_k component of (nabla_i phi) e_j."""
    return covariant_derivative(m, conn, m.phi)


def fundamental_F(m: AlgebraModel, conn: Connection) -> Tensor:
    """F(x, y, z) = g((nabla_x phi) y, z)."""
    return nabla_phi(m, conn).lower(1, m.g).transpose(0, 2, 1)


class LeeForms(NamedTuple):
    theta: Tensor
    theta_star: Tensor
    omega: Tensor


def lee_forms(m: AlgebraModel, F: Tensor) -> LeeForms:
    theta = contract(F, 0, 1, m.ginv)
    theta_star = contract(F.apply(1, m.phi), 0, 1, m.ginv)
    omega = F.insert(0, m.xi).insert(0, m.xi)
    return LeeForms(theta, theta_star, omega)


def d_eta(m: AlgebraModel, conn: Connection) -> Tensor:
    ne = nabla_eta(m, conn)
    return ne - ne.transpose(1, 0)


def riemann(m: AlgebraModel, conn: Connection) -> Tensor:
    """Curvature (0,4)-tensor of any connection with constant coefficients."""
    gam, c, d = conn.gamma, m.c, m.dim
    zero = Poly.const(m.params, 0)

    def r13(idx):
        l, i, j, k = idx
        total = zero
        for a in range(d):
            total = total + gam[a, j, k] * gam[l, i, a] - gam[a, i, k] * gam[l, j, a] \
                - c[a, i, j] * gam[l, a, k]
        return total

    # r13 indexed (l, i, j, k): e_l component of R(e_i, e_j) e_k
    return Tensor.build((CONTRA, CO, CO, CO), d, m.params, r13).transpose(1, 2, 3, 0).lower(3, m.g)


def ricci(m: AlgebraModel, R: Tensor) -> Tensor:
    """rho(x, y) = g^{kl} R(e_k, x, y, e_l)."""
    return contract(R, 0, 3, m.ginv)


class ScalarCurvatures(NamedTuple):
    tau: Poly
    tau_star: Poly
    rho: Tensor
    norm_nabla_xi: Poly


def double_trace(m: AlgebraModel, R: Tensor) -> tuple[Poly, Poly]:
    """tau = g^{ij} g^{kl} R(e_k, e_i, e_j, e_l) and its phi-twisted companion."""
    tau = contract(contract(R, 0, 3, m.ginv), 0, 1, m.ginv).value()
    tau_star = contract(contract(R.apply(3, m.phi), 0, 3, m.ginv), 0, 1, m.ginv).value()
    return tau, tau_star


def scalar_curvatures(m: AlgebraModel, R: Tensor, conn: Connection | None = None) -> ScalarCurvatures:
    conn = conn or levi_civita(m)
    tau, tau_star = double_trace(m, R)
    rho = ricci(m, R)
    nx = nabla_xi(m, conn).lower(0, m.g)  # (k, i): g(nabla_i xi, e_k)
    # g^{ij} g(nabla_i xi, nabla_j xi) = g^{ij} g^{kl} N(k, i) N(l, j)
    gram = contract(contract(nx.outer(nx), 0, 2, m.ginv), 0, 1, m.ginv).value()
    return ScalarCurvatures(tau, tau_star, rho, gram)
