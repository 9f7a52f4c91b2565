"""Model families shared by the tests.

Everything here builds models through the public constructor only; the
geometry is never computed here.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from bmetric.example import PHI_IMAGES
from bmetric.manifold import AlgebraModel

HALF = Fraction(1, 2)
G4 = (1, 1, -1, -1)


def structure(n: int):
    """Canonical (g, phi, xi) in dimension 2n+1, xi the last basis vector.

    n = 1: g = diag(1, -1, 1), phi e1 = e2, phi e2 = -e1.
    n = 2: the metric and phi of the five-dimensional family.
    """
    dim = 2 * n + 1
    phi = [[0] * dim for _ in range(dim)]
    if n == 1:
        diag = (1, -1, 1)
        phi[1][0], phi[0][1] = 1, -1
    elif n == 2:
        diag = G4 + (1,)
        for src, (dst, sign) in PHI_IMAGES.items():
            phi[dst][src] = sign
    else:
        raise ValueError("only n = 1, 2 are tabulated")
    g = [[diag[i] if i == j else 0 for j in range(dim)] for i in range(dim)]
    xi = [int(i == dim - 1) for i in range(dim)]
    return g, phi, xi


def random_brackets(rng: random.Random, dim: int, density: float = 0.5, span: int = 2):
    """Random antisymmetric structure constants; Jacobi is not enforced."""
    out = {}
    for i, j in itertools.combinations(range(dim), 2):
        coeffs = {k: Fraction(rng.randint(-span, span)) for k in range(dim) if rng.random() < density}
        if coeffs:
            out[(i, j)] = coeffs
    return out


def random_model(rng: random.Random, n: int = 2, density: float = 0.5) -> AlgebraModel:
    g, phi, xi = structure(n)
    return AlgebraModel.from_data(n, (), random_brackets(rng, 2 * n + 1, density), g, phi, xi, xi)


def semidirect(A, extra=None) -> AlgebraModel:
    """[e_i, xi] = A e_i on the abelian ideal span(e1..e4); always a Lie algebra.

    ``A[k][i]`` is the e_k component of A e_i (0-based).
    """
    brackets = {(i, 4): {k: A[k][i] for k in range(4)} for i in range(4)}
    if extra:
        brackets.update(extra)
    g, phi, xi = structure(2)
    return AlgebraModel.from_data(2, (), brackets, g, phi, xi, xi)


def _mm(a, b):
    return [[sum(a[i][k] * b[k][j] for k in range(4)) for j in range(4)] for i in range(4)]


def _lin(a, b, s=1, scale=1):
    return [[(a[i][j] + s * b[i][j]) * scale for j in range(4)] for i in range(4)]


def _adjoint(M):
    """g-adjoint on span(e1..e4): M^dagger = g^{-1} M^T g."""
    return [[G4[i] * M[j][i] * G4[j] for j in range(4)] for i in range(4)]


def _phi4():
    p = [[0] * 4 for _ in range(4)]
    for src, (dst, sign) in PHI_IMAGES.items():
        p[dst][src] = sign
    return p


def _phi_commuting(M):
    """Projection onto operators commuting with phi: (M - phi M phi) / 2."""
    p = _phi4()
    return _lin(M, _mm(_mm(p, M), p), -1, HALF)


def u_family(rng: random.Random, u3: bool, span: int = 3) -> AlgebraModel:
    """Semidirect model with a phi-commuting g-skew part.

    The g-self-adjoint part is projected onto phi-commuting operators when
    ``u3`` is set (giving a U3 model); otherwise it is left generic, which
    gives a U1 model outside U3.
    """
    M = [[Fraction(rng.randint(-span, span)) for _ in range(4)] for _ in range(4)]
    K = _phi_commuting(_lin(M, _adjoint(M), -1, HALF))
    S = _lin(M, _adjoint(M), 1, HALF)
    if u3:
        S = _phi_commuting(S)
    return semidirect(_lin(S, K))


def abelian(n: int = 2) -> AlgebraModel:
    g, phi, xi = structure(n)
    return AlgebraModel.from_data(n, (), {}, g, phi, xi, xi)


def random_invertible(rng: random.Random, dim: int, span: int = 2):
    while True:
        P = [[Fraction(rng.randint(-span, span)) for _ in range(dim)] for _ in range(dim)]
        try:
            inverse(P)
            return P
        except ZeroDivisionError:
            continue


def inverse(P):
    size = len(P)
    aug = [list(map(Fraction, row)) + [Fraction(int(i == j)) for j in range(size)] for i, row in enumerate(P)]
    for col in range(size):
        pivot = next((r for r in range(col, size) if aug[r][col]), None)
        if pivot is None:
            raise ZeroDivisionError("singular")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        p = aug[col][col]
        aug[col] = [x / p for x in aug[col]]
        for r in range(size):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [row[size:] for row in aug]


def change_frame(m: AlgebraModel, P) -> AlgebraModel:
    """Re-express a parameter-free model in the frame f_a = sum_b P[b][a] e_b."""
    d = m.dim
    Pi = inverse(P)
    val = lambda x: x.constant_value()
    g = [[sum(P[i][a] * P[j][b] * val(m.g[i, j]) for i in range(d) for j in range(d))
          for b in range(d)] for a in range(d)]
    phi = [[sum(Pi[a][i] * val(m.phi[i, j]) * P[j][b] for i in range(d) for j in range(d))
            for b in range(d)] for a in range(d)]
    xi = [sum(Pi[a][i] * val(m.xi[i]) for i in range(d)) for a in range(d)]
    eta = [sum(val(m.eta[i]) * P[i][a] for i in range(d)) for a in range(d)]
    brackets = {}
    for a, b in itertools.combinations(range(d), 2):
        # [f_a, f_b] in e-coordinates, then back to f-coordinates
        e_coords = [sum(P[i][a] * P[j][b] * val(m.c[k, i, j]) for i in range(d) for j in range(d))
                    for k in range(d)]
        f_coords = {c: sum(Pi[c][k] * e_coords[k] for k in range(d)) for c in range(d)}
        brackets[(a, b)] = {c: v for c, v in f_coords.items() if v}
    return AlgebraModel.from_data(m.n, (), brackets, g, phi, xi, eta)


def f0_family(rng: random.Random, span: int = 3) -> AlgebraModel:
    """Semidirect model whose operator is g-skew and commutes with phi; F vanishes."""
    M = [[Fraction(rng.randint(-span, span)) for _ in range(4)] for _ in range(4)]
    return semidirect(_phi_commuting(_lin(M, _adjoint(M), -1, HALF)))
