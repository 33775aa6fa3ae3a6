"""The Frobenius pairing <a, b> = lambda(ab) and the isomorphism sigma: S -> S*."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .algebra import PoissonAlgebra
from .linalg import Matrix, SingularMatrixError, inverse
from .modules import PoissonModule, twisted_module


class FrobeniusError(ValueError):
    """The functional does not give a nondegenerate pairing."""


@dataclass(frozen=True, eq=False)
class FrobeniusForm:
    algebra: PoissonAlgebra
    functional: dict  # sparse row vector lambda
    gram: Matrix
    gram_inverse: Matrix

    def pair(self, a: dict, b: dict) -> object:
        return self.value(self.algebra.mul(a, b))

    def value(self, a: dict):
        lam = self.functional
        tot = 0
        for j, x in a.items():
            c = lam.get(j)
            if c:
                tot = tot + c * x
        return tot

    @property
    def sigma(self) -> Matrix:
        """sigma(b)(a) = <a, b>; column b holds the dual coordinates of sigma(b)."""
        return self.gram

    def solve_pairing(self, v: dict) -> dict:
        """The element s with <s, e_b> = v[b] for every basis b."""
        return self.gram_inverse.apply(v)


def socle_monomial(S: PoissonAlgebra) -> int:
    """Index of the unique standard monomial not divisible into any other."""
    maximal = []
    for j, m in enumerate(S.basis):
        if not any(m != o and all(a <= b for a, b in zip(m, o)) for o in S.basis):
            maximal.append(j)
    if len(maximal) != 1:
        names = ", ".join(S.basis_name(j) for j in maximal)
        raise FrobeniusError(f"socle functional needs a unique maximal monomial; found {names}")
    return maximal[0]


def frobenius_form(S: PoissonAlgebra, choice=None) -> FrobeniusForm:
    """``choice``: 'socle', a dict monomial -> scalar, or None for the presentation's choice."""
    if choice is None:
        choice = S.presentation.frobenius
    F = S.field
    if choice == "socle":
        lam = {socle_monomial(S): F(1)}
    else:
        lam = {}
        for m, c in choice.items():
            j = S.index.get(tuple(m))
            if j is None:
                raise FrobeniusError(f"monomial {m} is not a basis element")
            if F(c):
                lam[j] = F(c)
    N = S.dim
    form = FrobeniusForm(S, lam, Matrix.zero(N, N, F), Matrix.zero(N, N, F))
    rows = []
    for i in range(N):
        row = {}
        for j in range(N):
            v = form.value(S.mult[i][j])
            if v:
                row[j] = v
        rows.append(row)
    gram = Matrix(N, N, tuple(rows), F)
    try:
        ginv = inverse(gram)
    except SingularMatrixError:
        raise FrobeniusError("the pairing is degenerate; the algebra is not Frobenius for this functional") from None
    return FrobeniusForm(S, lam, gram, ginv)


def check_form(F: FrobeniusForm) -> dict:
    """Associativity and symmetry of the pairing on all basis triples/pairs."""
    S = F.algebra
    N = S.dim
    e = [S.basis_element(i) for i in range(N)]
    assoc = all(
        F.pair(S.mult[a][b], e[c]) == F.pair(e[a], S.mult[b][c]) for a, b, c in itertools.product(range(N), repeat=3)
    )
    return {"associative": assoc, "symmetric": F.gram == F.gram.T, "nondegenerate": True}


def sigma_module(F: FrobeniusForm) -> PoissonModule:
    return twisted_module(F.algebra, F.sigma)
