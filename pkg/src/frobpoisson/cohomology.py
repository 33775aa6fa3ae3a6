"""Poisson cohomology through Hom_S(Omega^k, M) for a left Poisson module M.

An element g is stored by its values g(dx_I) in M, one block per k-subset I,
at ambient coordinate ``g_index * dim(M) + m``.  S-linearity is the linear
condition that g kills every relation of Omega^k.  With M the left regular
module this is the space of skew multiderivations of degree k.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from ._memo import per_object
from .algebra import PoissonAlgebra, format_poly
from .homology import boundary, poisson_homology, tensor_space
from .kaehler import (
    d_ambient,
    format_dx,
    kaehler_module,
    subset_index,
    subsets,
    wedge_ambient,
)
from .linalg import Matrix, RowSpace, axpy, homology_dim, rank
from .modules import LEFT, RIGHT, PoissonModule, dual_module, regular_module
from .reports import ValidationReport


class NotInSpaceError(AssertionError):
    """A vector expected to satisfy the S-linearity constraints does not."""


@dataclass(eq=False)
class HomSpace:
    algebra: PoissonAlgebra
    module: PoissonModule
    degree: int
    generators: tuple
    constraints: RowSpace
    basis: list = field(default_factory=list)

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def ambient_dim(self) -> int:
        return len(self.generators) * self.module.dim

    @cached_property
    def free_columns(self) -> list:
        return self.constraints.free_columns()

    def contains(self, v: dict) -> bool:
        for row in self.constraints.pivots.values():
            tot = 0
            for c, x in row.items():
                y = v.get(c)
                if y:
                    tot = tot + x * y
            if tot:
                return False
        return True

    def coords(self, v: dict, check: bool = True) -> dict:
        if check and not self.contains(v):
            raise NotInSpaceError(f"vector is not S-linear in degree {self.degree}")
        out = {}
        for i, f in enumerate(self.free_columns):
            x = v.get(f)
            if x:
                out[i] = x
        return out

    def vector(self, coords: dict) -> dict:
        out: dict = {}
        for i, c in coords.items():
            axpy(out, c, self.basis[i])
        return out

    def value(self, v: dict, g: int) -> dict:
        d = self.module.dim
        base = g * d
        return {c - base: x for c, x in v.items() if base <= c < base + d}

    def apply(self, v: dict, w: dict) -> dict:
        """g(w) for an ambient Omega^k vector w."""
        N = self.algebra.dim
        M = self.module
        out: dict = {}
        for c, x in w.items():
            g, j = divmod(c, N)
            val = self.value(v, g)
            if val:
                axpy(out, x, M.act_on({j: 1}, val))
        return out

    def element(self, v: dict) -> "MultiDerivation":
        if not self.contains(v):
            raise NotInSpaceError(f"vector is not S-linear in degree {self.degree}")
        return MultiDerivation(self, v)

    def basis_element(self, i: int) -> "MultiDerivation":
        return MultiDerivation(self, self.basis[i])

    def zero(self) -> "MultiDerivation":
        return MultiDerivation(self, {})


@dataclass(frozen=True, eq=False)
class MultiDerivation:
    """An element of Hom_S(Omega^m, M), by its values on the generators dx_I."""

    space: HomSpace
    values: dict
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def degree(self) -> int:
        return self.space.degree

    @property
    def algebra(self) -> PoissonAlgebra:
        return self.space.algebra

    def value(self, I) -> dict:
        g = subset_index(self.algebra.nvars, self.degree)[tuple(I)]
        return self.space.value(self.values, g)

    def on_ambient(self, w: dict) -> dict:
        return self.space.apply(self.values, w)

    @property
    def coords(self) -> dict:
        return self.space.coords(self.values)

    def is_zero(self) -> bool:
        return not self.values

    def __eq__(self, other):
        if not isinstance(other, MultiDerivation):
            return NotImplemented
        return self.space is other.space and self.values == other.values

    __hash__ = None

    def __add__(self, other: "MultiDerivation") -> "MultiDerivation":
        return MultiDerivation(self.space, axpy(dict(self.values), 1, other.values))

    def __sub__(self, other: "MultiDerivation") -> "MultiDerivation":
        return MultiDerivation(self.space, axpy(dict(self.values), -1, other.values))

    def scale(self, c) -> "MultiDerivation":
        return MultiDerivation(self.space, {k: c * x for k, x in self.values.items()} if c else {})

    def format(self) -> str:
        return format_multivector(self.space, self.values)


def format_multivector(space: HomSpace, v: dict) -> str:
    S, M = space.algebra, space.module
    if not v:
        return "0"
    terms = []
    for g, I in enumerate(space.generators):
        val = space.value(v, g)
        if not val:
            continue
        coeff = format_poly([(M.labels[m], x) for m, x in sorted(val.items())], S.names, order=lambda _m: 0)
        if space.degree == 0:
            terms.append(coeff)
            continue
        if len(val) > 1 or coeff.startswith("-"):
            coeff = f"({coeff})"
        terms.append(f"{coeff}·{format_dx(S, I, symbol='∂')}")
    return " + ".join(terms)


@per_object
def hom_space(S: PoissonAlgebra, M: PoissonModule, k: int) -> HomSpace:
    if M.side != LEFT:
        raise ValueError("Hom_S(Omega^k, M) needs a left Poisson module")
    n, N, d = S.nvars, S.dim, M.dim
    gens = subsets(n, k) if 0 <= k <= n else ()
    rs = RowSpace(len(gens) * d, S.field)
    if gens:
        act_rows = [m.rows for m in M.act]
        for r in kaehler_module(S, k).quotient.relation_basis:
            out_rows: dict = {}
            for c, x in r.items():
                g, j = divmod(c, N)
                base = g * d
                for mu, row in enumerate(act_rows[j]):
                    if not row:
                        continue
                    tgt = out_rows.setdefault(mu, {})
                    axpy(tgt, x, {base + m: y for m, y in row.items()})
            for mu in sorted(out_rows):
                if out_rows[mu]:
                    rs.add(out_rows[mu])
    space = HomSpace(S, M, k, gens, rs)
    one = S.field(1)
    for f in space.free_columns:
        v = {f: one}
        for p in rs.rows_touching(f):
            v[p] = -rs.pivots[p][f]
        space.basis.append(v)
    return space


def left_regular(S: PoissonAlgebra) -> PoissonModule:
    return _left_regular(S)


@per_object
def _left_regular(S: PoissonAlgebra) -> PoissonModule:
    return regular_module(S, LEFT)


def multiderivation_space(S: PoissonAlgebra, m: int) -> HomSpace:
    """The skew multiderivations of degree m, as Hom_S(Omega^m, S)."""
    return hom_space(S, left_regular(S), m)


def multiderivation(S: PoissonAlgebra, values: dict) -> MultiDerivation:
    """Build from {I: element} on generator tuples; checks S-linearity."""
    degs = {len(I) for I in values}
    if len(degs) > 1:
        raise ValueError("mixed degrees")
    k = degs.pop() if degs else 0
    space = multiderivation_space(S, k)
    idx = subset_index(S.nvars, k) if k <= S.nvars else {}
    v: dict = {}
    for I, val in values.items():
        if tuple(I) not in idx:
            raise ValueError(f"generator tuple {I} out of range")
        g = idx[tuple(I)]
        for j, x in val.items():
            if x:
                v[g * S.dim + j] = x
    return space.element(v)


def bivector(S: PoissonAlgebra) -> MultiDerivation:
    """The Poisson bivector pi with pi(dx_i ^ dx_j) = {x_i, x_j}."""
    n = S.nvars
    values = {}
    for i, j in subsets(n, 2):
        a, b = S.generators[i], S.generators[j]
        values[(i, j)] = S.br(a, b) if a and b else {}
    if n < 2:
        return multiderivation_space(S, 2).zero()
    return multiderivation(S, values)


def ambient_wedge_of_differentials(S: PoissonAlgebra, args) -> dict:
    """d a_1 ^ ... ^ d a_m as an ambient vector (unreduced)."""
    w = {0: S.field(1)}
    deg = 0
    for a in args:
        if deg + 1 > S.nvars:
            return {}
        w = wedge_ambient(S, w, deg, d_ambient(S, a), 1)
        deg += 1
        if not w:
            return {}
    return w


def evaluate(S: PoissonAlgebra, P: MultiDerivation, *args) -> dict:
    """P(a_1, ..., a_m), i.e. P applied to d a_1 ^ ... ^ d a_m."""
    if len(args) != P.degree:
        raise ValueError(f"degree {P.degree} needs {P.degree} arguments, got {len(args)}")
    if P.degree == 0:
        return P.space.value(P.values, 0)
    return P.on_ambient(ambient_wedge_of_differentials(S, args))


def apply_coboundary(S: PoissonAlgebra, g: MultiDerivation) -> MultiDerivation:
    """delta'(g) evaluated on every generator dx_J of degree k+1."""
    space = g.space
    M = space.module
    k = space.degree
    n, N = S.nvars, S.dim
    target = hom_space(S, M, k + 1)
    if k + 1 > n:
        return target.zero()
    gen = S.generators
    idx_k = subset_index(n, k)
    d = M.dim
    out: dict = {}
    for gJ, J in enumerate(subsets(n, k + 1)):
        val: dict = {}
        for i, t in enumerate(J):
            if not gen[t]:
                continue
            inner = space.value(g.values, idx_k[J[:i] + J[i + 1 :]])
            if inner:
                axpy(val, -1 if i % 2 else 1, M.brk_on(gen[t], inner))
        for i in range(k + 1):
            for l in range(i + 1, k + 1):
                a, b = gen[J[i]], gen[J[l]]
                if not a or not b:
                    continue
                br = S.br(a, b)
                if not br:
                    continue
                rest = tuple(t for s, t in enumerate(J) if s not in (i, l))
                w = wedge_ambient(S, d_ambient(S, br), 1, {subset_index(n, k - 1)[rest] * N: S.field(1)}, k - 1)
                if w:
                    axpy(val, -1 if (i + l) % 2 else 1, space.apply(g.values, w))
        for m, x in val.items():
            out[gJ * d + m] = x
    return target.element(out)


@per_object
def coboundary(S: PoissonAlgebra, M: PoissonModule, k: int) -> Matrix:
    """Matrix of delta'_k: Hom_S(Omega^k, M) -> Hom_S(Omega^{k+1}, M) on the chosen bases."""
    src = hom_space(S, M, k) if k >= 0 else None
    tgt = hom_space(S, M, k + 1)
    if src is None:
        return Matrix.zero(tgt.dim, 0, S.field)
    cols = [tgt.coords(apply_coboundary(S, src.basis_element(i)).values) for i in range(src.dim)]
    return Matrix.from_columns(cols, tgt.dim, S.field)


@dataclass
class CohomologyReport:
    algebra: PoissonAlgebra
    module: PoissonModule
    dims: list
    representatives: list = field(default_factory=list)  # per degree: coordinate vectors
    rendered: list = field(default_factory=list)


def cohomology(S: PoissonAlgebra, M: PoissonModule) -> CohomologyReport:
    n = S.nvars
    dims, reps, text = [], [], []
    for k in range(n + 1):
        h = homology_dim(coboundary(S, M, k - 1), coboundary(S, M, k))
        space = hom_space(S, M, k)
        dims.append(h.dim)
        reps.append(h.representatives)
        text.append([format_multivector(space, space.vector(v)) for v in h.representatives])
    return CohomologyReport(S, M, dims, reps, text)


def poisson_cohomology(S: PoissonAlgebra) -> CohomologyReport:
    """HP^k(S) for k = 0..nvars; degree 0 is the Casimir subalgebra."""
    return cohomology(S, left_regular(S))


@dataclass
class DualityReport:
    cohomology_dims: list
    homology_dims: list
    checks: ValidationReport


def phi_matrix(S: PoissonAlgebra, M: PoissonModule, k: int) -> Matrix:
    """phi_f(m (x) dx_I) = f(dx_I)(m), from Hom_S(Omega^k, M*) to (M (x)_S Omega^k)*.

    Both sides share the ambient coordinate g * dim(M) + m, so row t of the
    matrix reads the Hom basis vectors at the quotient column of t.
    """
    return _phi(S, M, k)


@per_object
def _dual_of(M: PoissonModule) -> PoissonModule:
    return dual_module(M)


def phi_duality_check(S: PoissonAlgebra, M: PoissonModule) -> DualityReport:
    """Commutation phi.delta' = boundary^T.phi and the matching (co)homology dimensions."""
    if M.side != RIGHT:
        raise ValueError("phi_duality_check needs a right Poisson module")
    Mstar = _dual_of(M)
    n = S.nvars
    rep = ValidationReport()
    for k in range(n + 1):
        phi_k = _phi(S, M, k)
        ok = phi_k.nrows == phi_k.ncols and rank(phi_k) == phi_k.nrows
        rep.add(f"phi_iso_{k}", ok, None if ok else (phi_k.nrows, phi_k.ncols))
    for k in range(n + 1):
        lhs = _phi(S, M, k + 1) @ coboundary(S, Mstar, k)
        rhs = boundary(S, M, k + 1).T @ _phi(S, M, k)
        ok = lhs == rhs
        rep.add(f"phi_commutes_{k}", ok, None if ok else k)
    co = cohomology(S, Mstar).dims
    ho = poisson_homology(S, M).dims
    rep.add("dims_equal", co == ho, None if co == ho else {"cohomology": co, "homology": ho})
    return DualityReport(co, ho, rep)


@per_object
def _phi(S: PoissonAlgebra, M: PoissonModule, k: int) -> Matrix:
    space = hom_space(S, _dual_of(M), k)
    ts = tensor_space(S, M, k)
    rows = []
    for c in ts.quotient.basis_columns:
        rows.append({i: v[c] for i, v in enumerate(space.basis) if v.get(c)})
    return Matrix(ts.dim, space.dim, tuple(rows), S.field)
