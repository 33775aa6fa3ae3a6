"""Kähler forms Omega^k(S) as quotients of the free S-module on dx_I.

Omega^k is presented directly as free-on-{dx_I : |I| = k} modulo the S-span of
d(f) ^ dx_J for every relation monomial f and |J| = k - 1.  An ambient vector
has coordinate ``g * N + j`` for the term ``e_j dx_{I_g}``; ``I_g`` is the g-th
k-subset in lexicographic order.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from functools import cached_property

from ._memo import per_object
from .algebra import PoissonAlgebra, divides, format_poly
from .linalg import Matrix, QuotientSpace, axpy, quotient


@functools.lru_cache(maxsize=None)
def subsets(n: int, k: int) -> tuple:
    if k < 0:
        return ()
    return tuple(itertools.combinations(range(n), k))


@functools.lru_cache(maxsize=None)
def subset_index(n: int, k: int) -> dict:
    return {I: g for g, I in enumerate(subsets(n, k))}


@functools.lru_cache(maxsize=None)
def merge_sign(I: tuple, J: tuple):
    """(sign, sorted union) moving dx_J past dx_I into order; sign 0 if they meet."""
    if set(I) & set(J):
        return 0, None
    inv = sum(1 for i in I for j in J if i > j)
    return (-1 if inv % 2 else 1), tuple(sorted(I + J))


def wedge_ambient(S: PoissonAlgebra, a: dict, p: int, b: dict, q: int) -> dict:
    """(s dx_I) ^ (t dx_J) = +-st dx_{I u J} on ambient vectors of degrees p, q."""
    n, N = S.nvars, S.dim
    if p + q > n:
        return {}
    gp, gq = subsets(n, p), subsets(n, q)
    target = subset_index(n, p + q)
    mult = S.mult
    out: dict = {}
    for ca, x in a.items():
        ga, ja = divmod(ca, N)
        I = gp[ga]
        row = mult[ja]
        for cb, y in b.items():
            gb, jb = divmod(cb, N)
            sign, K = merge_sign(I, gq[gb])
            if not sign:
                continue
            prod = row[jb]
            if not prod:
                continue
            base = target[K] * N
            coef = sign * x * y
            for k, z in prod.items():
                col = base + k
                nv = out.get(col, 0) + coef * z
                if nv:
                    out[col] = nv
                else:
                    out.pop(col, None)
    return out


def scale_ambient(S: PoissonAlgebra, s: dict, w: dict) -> dict:
    """s * w for an element s and an ambient form w."""
    N = S.dim
    out: dict = {}
    for c, x in w.items():
        g, j = divmod(c, N)
        axpy(out, x, {g * N + k: v for k, v in S.mul(s, {j: 1}).items()})
    return out


def d_ambient(S: PoissonAlgebra, s: dict) -> dict:
    """d s = sum_t (ds/dx_t) dx_t, unreduced, computed on the normal-form representative."""
    N = S.dim
    out: dict = {}
    for t in range(S.nvars):
        for k, v in S.partial(s, t).items():
            out[t * N + k] = v
    return out


def dx_ambient(S: PoissonAlgebra, I: tuple) -> dict:
    """The generator dx_I as an ambient vector."""
    g = subset_index(S.nvars, len(I))[tuple(I)]
    return {g * S.dim: S.field(1)}


def de_rham_ambient(S: PoissonAlgebra, w: dict, k: int) -> dict:
    """Ambient de Rham differential: e_j dx_I -> d(e_j) ^ dx_I."""
    N = S.dim
    out: dict = {}
    for c, x in w.items():
        g, j = divmod(c, N)
        dj = _d_basis(S, j)
        if dj:
            axpy(out, x, wedge_ambient(S, dj, 1, {g * N: S.field(1)}, k))
    return out


@per_object
def _d_basis(S: PoissonAlgebra, j: int) -> dict:
    return d_ambient(S, {j: S.field(1)})


@dataclass(eq=False)
class PresentedModule:
    algebra: PoissonAlgebra
    degree: int
    generators: tuple
    quotient: QuotientSpace

    @property
    def dim(self) -> int:
        return self.quotient.dim

    @property
    def ambient_dim(self) -> int:
        return self.quotient.ambient_dim

    def project(self, w: dict) -> dict:
        return self.quotient.project(w)

    def lift(self, q: dict) -> dict:
        return self.quotient.lift(q)

    def label(self, i: int) -> str:
        S = self.algebra
        g, j = divmod(self.quotient.basis_columns[i], S.dim)
        dx = format_dx(S, self.generators[g])
        coef = S.basis_name(j)
        if self.degree == 0:
            return coef
        return dx if coef == "1" else f"{coef}*{dx}"

    @cached_property
    def act(self) -> tuple:
        """act[i]: matrix of multiplication by e_i on the quotient basis."""
        S = self.algebra
        mats = []
        for i in range(S.dim):
            cols = [self.project(scale_ambient(S, {i: S.field(1)}, self.quotient.section(b))) for b in range(self.dim)]
            mats.append(Matrix.from_columns(cols, self.dim, S.field))
        return tuple(mats)


def format_dx(S: PoissonAlgebra, I: tuple, symbol: str = "d") -> str:
    return "∧".join(f"{symbol}{S.names[t]}" for t in I) if I else "1"


@per_object
def kaehler_module(S: PoissonAlgebra, k: int) -> PresentedModule:
    """Omega^k(S); Omega^0 = S and Omega^k = 0 for k > nvars."""
    n, N = S.nvars, S.dim
    gens = subsets(n, k) if 0 <= k <= n else ()
    amb = len(gens) * N
    return PresentedModule(S, k, gens, quotient(amb, kaehler_relations(S, k), S.field))


@per_object
def kaehler_relations(S: PoissonAlgebra, k: int) -> list:
    """Spanning vectors of the relation subspace of the ambient free module in degree k."""
    n, N = S.nvars, S.dim
    if k <= 0 or k > n:
        return []
    rels = []
    P = S.presentation
    for r in P.relations:
        df = {}
        for t in range(n):
            if r[t] == 0:
                continue
            m = list(r)
            m[t] -= 1
            m = tuple(m)
            if any(divides(q, m) for q in P.relations):
                continue
            df[t * N + S.index[m]] = S.field(r[t])
        df = {c: v for c, v in df.items() if v}
        if not df:
            continue
        for J in subsets(n, k - 1):
            w = wedge_ambient(S, df, 1, {subset_index(n, k - 1)[J] * N: S.field(1)}, k - 1)
            if not w:
                continue
            for i in range(N):
                v = scale_ambient(S, {i: S.field(1)}, w)
                if v:
                    rels.append(v)
    return rels


@dataclass(frozen=True, eq=False)
class Form:
    """A class in Omega^degree(S), in quotient coordinates."""

    algebra: PoissonAlgebra
    degree: int
    coords: dict

    @property
    def module(self) -> PresentedModule:
        return kaehler_module(self.algebra, self.degree)

    def ambient(self) -> dict:
        return self.module.lift(self.coords)

    def is_zero(self) -> bool:
        return not self.coords

    def __eq__(self, other):
        if not isinstance(other, Form):
            return NotImplemented
        return self.algebra is other.algebra and self.degree == other.degree and self.coords == other.coords

    __hash__ = None

    def format(self) -> str:
        mod = self.module
        if not self.coords:
            return "0"
        items = [(mod.label(i), self.coords[i]) for i in sorted(self.coords)]
        return format_poly(items, self.algebra.names, order=lambda _m: 0)


def form_from_ambient(S: PoissonAlgebra, k: int, w: dict) -> Form:
    if k > S.nvars or k < 0:
        return Form(S, k, {})
    return Form(S, k, kaehler_module(S, k).project(w))


def d_element(S: PoissonAlgebra, s: dict) -> Form:
    return form_from_ambient(S, 1, d_ambient(S, s))


def de_rham_d(omega: Form) -> Form:
    S, k = omega.algebra, omega.degree
    if k + 1 > S.nvars:
        return Form(S, k + 1, {})
    return form_from_ambient(S, k + 1, de_rham_ambient(S, omega.ambient(), k))


def wedge_forms(omega: Form, eta: Form) -> Form:
    S = omega.algebra
    p, q = omega.degree, eta.degree
    if p + q > S.nvars:
        return Form(S, p + q, {})
    return form_from_ambient(S, p + q, wedge_ambient(S, omega.ambient(), p, eta.ambient(), q))


def generator_form(S: PoissonAlgebra, I: tuple, coefficient: dict | None = None) -> Form:
    w = dx_ambient(S, I)
    if coefficient is not None:
        w = scale_ambient(S, coefficient, w)
    return form_from_ambient(S, len(I), w)
