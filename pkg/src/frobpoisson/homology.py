"""Poisson homology HP_k(S, M) from the complex (M (x)_S Omega^k, boundary).

M (x)_S Omega^k is realized as M^{#I} (one copy of M per dx_I, since
m (x) s dx_I = m.s (x) dx_I) modulo m.r for every relation r of Omega^k.
Ambient coordinate ``g * dim(M) + m`` stands for ``m (x) dx_{I_g}``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ._memo import per_object
from .algebra import PoissonAlgebra, format_poly
from .kaehler import d_ambient, format_dx, kaehler_module, subset_index, subsets, wedge_ambient
from .linalg import Matrix, QuotientSpace, RowSpace, axpy, homology_dim
from .modules import RIGHT, PoissonModule


class WellDefinednessError(AssertionError):
    """The boundary does not preserve the relation subspace."""


@dataclass(eq=False)
class TensorSpace:
    module: PoissonModule
    degree: int
    generators: tuple
    quotient: QuotientSpace

    @property
    def dim(self) -> int:
        return self.quotient.dim

    def format(self, q: dict) -> str:
        """Render quotient coordinates as a sum of m (x) dx_I terms."""
        M = self.module
        S = M.algebra
        d = M.dim
        groups: dict = {}
        for c, x in self.quotient.lift(q).items():
            g, m = divmod(c, d)
            groups.setdefault(g, {})[m] = x
        terms = []
        for g in sorted(groups):
            coeff = format_poly([(M.labels[m], x) for m, x in sorted(groups[g].items())], S.names, order=lambda _m: 0)
            if len(groups[g]) > 1 or coeff.startswith("-"):
                coeff = f"({coeff})"
            if self.degree == 0:
                terms.append(coeff)
            else:
                terms.append(f"{coeff}⊗{format_dx(S, self.generators[g])}")
        return " + ".join(terms) if terms else "0"


def _check_right(M: PoissonModule):
    if M.side != RIGHT:
        raise ValueError("Poisson homology needs a right Poisson module")


@per_object
def tensor_space(S: PoissonAlgebra, M: PoissonModule, k: int) -> TensorSpace:
    _check_right(M)
    n, N, d = S.nvars, S.dim, M.dim
    gens = subsets(n, k) if 0 <= k <= n else ()
    rs = RowSpace(len(gens) * d, S.field)
    if gens:
        cols = M.act_columns
        for r in kaehler_module(S, k).quotient.relation_basis:
            for m in range(d):
                v: dict = {}
                for c, x in r.items():
                    g, j = divmod(c, N)
                    base = g * d
                    for mm, y in cols[j][m].items():
                        col = base + mm
                        nv = v.get(col, 0) + x * y
                        if nv:
                            v[col] = nv
                        else:
                            del v[col]
                if v:
                    rs.add(v)
    return TensorSpace(M, k, gens, QuotientSpace(len(gens) * d, rs))


def _boundary_column(S: PoissonAlgebra, M: PoissonModule, k: int, g: int, m: int) -> dict:
    """Ambient image of m (x) dx_{I_g} under the boundary of degree k."""
    n, N, d = S.nvars, S.dim, M.dim
    I = subsets(n, k)[g]
    idx = subset_index(n, k - 1)
    gen = [next(iter(x)) if x else None for x in S.generators]
    out: dict = {}
    for p, t in enumerate(I):
        if gen[t] is None:
            continue
        rest = I[:p] + I[p + 1 :]
        v = M.brk_columns[gen[t]][m]
        if v:
            base = idx[rest] * d
            axpy(out, -1 if p % 2 else 1, {base + mm: y for mm, y in v.items()})
    for p in range(k):
        for q in range(p + 1, k):
            a, b = gen[I[p]], gen[I[q]]
            if a is None or b is None:
                continue
            br = S.brk[a][b]
            if not br:
                continue
            rest = tuple(t for s, t in enumerate(I) if s not in (p, q))
            w = wedge_ambient(S, d_ambient(S, br), 1, {_rest_index(n, rest) * N: S.field(1)}, k - 2)
            sign = -1 if (p + q) % 2 else 1
            for c, x in w.items():
                g2, j = divmod(c, N)
                mv = M.act_columns[j][m]
                if mv:
                    base = g2 * d
                    axpy(out, sign * x, {base + mm: y for mm, y in mv.items()})
    return out


def _rest_index(n, rest):
    return subset_index(n, len(rest))[rest]


@per_object
def _ambient_boundary(S: PoissonAlgebra, M: PoissonModule, k: int) -> list:
    d = M.dim
    return [_boundary_column(S, M, k, g, m) for g in range(len(subsets(S.nvars, k))) for m in range(d)]


@per_object
def boundary(S: PoissonAlgebra, M: PoissonModule, k: int) -> Matrix:
    """Matrix of the degree-k boundary on the chosen quotient bases."""
    _check_right(M)
    n = S.nvars
    if k < 1 or k > n:
        src = tensor_space(S, M, k).dim if 0 <= k <= n else 0
        tgt = tensor_space(S, M, k - 1).dim if 0 <= k - 1 <= n else 0
        return Matrix.zero(tgt, src, S.field)
    src, tgt = tensor_space(S, M, k), tensor_space(S, M, k - 1)
    amb = _ambient_boundary(S, M, k)

    def image(v: dict) -> dict:
        out: dict = {}
        for c, x in v.items():
            axpy(out, x, amb[c])
        return out

    for r in src.quotient.relation_basis:
        if tgt.quotient.project(image(r)):
            raise WellDefinednessError(f"boundary of degree {k} does not preserve relations")
    cols = [tgt.quotient.project(amb[c]) for c in src.quotient.basis_columns]
    return Matrix.from_columns(cols, tgt.dim, S.field)


@dataclass
class HomologyReport:
    algebra: PoissonAlgebra
    module: PoissonModule
    dims: list
    representatives: list = field(default_factory=list)  # per degree: list of quotient vectors
    rendered: list = field(default_factory=list)


def poisson_homology(S: PoissonAlgebra, M: PoissonModule) -> HomologyReport:
    _check_right(M)
    n = S.nvars
    dims, reps, text = [], [], []
    for k in range(n + 1):
        h = homology_dim(boundary(S, M, k + 1), boundary(S, M, k))
        dims.append(h.dim)
        reps.append(h.representatives)
        ts = tensor_space(S, M, k)
        text.append([ts.format(v) for v in h.representatives])
    return HomologyReport(S, M, dims, reps, text)
