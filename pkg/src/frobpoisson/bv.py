"""The BV operator on multiderivations of a Frobenius Poisson algebra.

Multiderivations are held as Hom_S(Omega^m, S) elements.  Operations whose
results are again multiderivations (wedge, Schouten bracket, Delta) return
such elements, assembled from values on generator tuples.  The circle product
and the two halves of the split wedge are not multiderivations, so they are
modelled as multilinear maps on tuples of basis indices.

Tuples of basis indices never contain the unit (index 0) in the identity
sweeps: every term of the identities has a derivation in each slot.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field
from typing import Callable

from .algebra import PoissonAlgebra
from .cohomology import (
    MultiDerivation,
    apply_coboundary,
    bivector,
    coboundary,
    evaluate,
    hom_space,
    left_regular,
    multiderivation_space,
    poisson_cohomology,
)
from .frobenius import FrobeniusForm
from .kaehler import de_rham_ambient, kaehler_module, subsets
from .linalg import Matrix, RowSpace, axpy
from .modules import dual_regular_module, regular_module
from .reports import ValidationReport


class NotUnimodularError(ValueError):
    """The induced BV structure on HP needs a unimodular algebra."""


class BVConsistencyError(AssertionError):
    """An operation that the theory guarantees produced an invalid result."""


# -- evaluation on basis tuples ----------------------------------------------


def _perm_sign(idx) -> int:
    inv = 0
    for i in range(len(idx)):
        for j in range(i + 1, len(idx)):
            if idx[i] > idx[j]:
                inv += 1
    return -1 if inv % 2 else 1


def shuffle_sign(pos, total: int) -> int:
    """Sign of the shuffle listing positions ``pos`` first, then the rest in order."""
    return -1 if sum(p - i for i, p in enumerate(pos)) % 2 else 1


def md_at(P: MultiDerivation, idx) -> dict:
    """P(e_{i_1}, ..., e_{i_m}) for any tuple of basis indices."""
    if P.degree == 0:
        return P.space.value(P.values, 0)
    if 0 in idx or len(set(idx)) < len(idx):
        return {}
    key = tuple(sorted(idx))
    table = P._cache.setdefault("table", {})
    val = table.get(key)
    if val is None:
        S = P.algebra
        val = evaluate(S, P, *({i: S.field(1)} for i in key))
        table[key] = val
    if not val:
        return val
    if _perm_sign(idx) < 0:
        return {k: -x for k, x in val.items()}
    return val


def md_apply(P: MultiDerivation, args) -> dict:
    """P on arbitrary elements (sparse vectors), expanded multilinearly."""
    if P.degree == 0:
        return P.space.value(P.values, 0)
    out: dict = {}
    for combo in itertools.product(*(a.items() for a in args)):
        coef = 1
        for _, x in combo:
            coef = coef * x
        val = md_at(P, tuple(c for c, _ in combo))
        if val:
            axpy(out, coef, val)
    return out


def _md_first(P: MultiDerivation, v: dict, rest: tuple) -> dict:
    """P(v, e_rest...) for an element v and basis indices rest."""
    out: dict = {}
    for c, x in v.items():
        val = md_at(P, (c,) + rest)
        if val:
            axpy(out, x, val)
    return out


@dataclass(frozen=True)
class Multilinear:
    """A multilinear map S^{(x) degree} -> S given on tuples of basis indices."""

    algebra: PoissonAlgebra
    degree: int
    fn: Callable

    def __call__(self, idx) -> dict:
        return self.fn(tuple(idx))


def as_multilinear(P: MultiDerivation) -> Multilinear:
    return Multilinear(P.algebra, P.degree, lambda idx: md_at(P, idx))


@functools.lru_cache(maxsize=None)
def _shuffles(total: int, k: int) -> tuple:
    out = []
    for pos in itertools.combinations(range(total), k):
        rest = tuple(i for i in range(total) if i not in pos)
        out.append((pos, rest, shuffle_sign(pos, total)))
    return tuple(out)


def _circ_at(P: MultiDerivation, Q: MultiDerivation, idx: tuple) -> dict:
    m, n = P.degree, Q.degree
    out: dict = {}
    if m == 0:
        return out
    for pos, rest, sign in _shuffles(m + n - 1, n):
        q = md_at(Q, tuple(idx[p] for p in pos))
        if q:
            val = _md_first(P, q, tuple(idx[r] for r in rest))
            if val:
                axpy(out, sign, val)
    return out


def circ(P: MultiDerivation, Q: MultiDerivation) -> Multilinear:
    """(P o Q)(a) = sum over shuffles of P(Q(a_first n), a_remaining m-1)."""
    return Multilinear(P.algebra, max(P.degree + Q.degree - 1, 0), lambda idx: _circ_at(P, Q, idx))


def _wedge_at(P: MultiDerivation, Q: MultiDerivation, idx: tuple, part: int = 0) -> dict:
    """Shuffle sum for P ^ Q; part 1 keeps shuffles with P holding the last slot, part 2 the rest."""
    S = P.algebra
    m, n = P.degree, Q.degree
    L = m + n
    out: dict = {}
    for pos, rest, sign in _shuffles(L, m):
        last_in_p = bool(pos) and pos[-1] == L - 1
        if (part == 1 and not last_in_p) or (part == 2 and last_in_p):
            continue
        p = md_at(P, tuple(idx[i] for i in pos))
        if not p:
            continue
        q = md_at(Q, tuple(idx[i] for i in rest))
        if q:
            axpy(out, sign, S.mul(p, q))
    return out


def _wedge_fn(P: MultiDerivation, Q: MultiDerivation, part: int = 0) -> Callable:
    return lambda idx: _wedge_at(P, Q, tuple(idx), part)


def wedge_parts(P: MultiDerivation, Q: MultiDerivation) -> tuple:
    """(P ^_1 Q, P ^_2 Q) as multilinear maps; their sum is P ^ Q."""
    S = P.algebra
    L = P.degree + Q.degree
    return Multilinear(S, L, _wedge_fn(P, Q, 1)), Multilinear(S, L, _wedge_fn(P, Q, 2))


def delta_multilinear(F: FrobeniusForm, X: Multilinear, idx) -> dict:
    """Delta(X)(a) from <Delta(X)(a), e_b> = (-1)^(k-1) lambda(X(a, e_b))."""
    S = F.algebra
    k = X.degree
    sign = -1 if (k - 1) % 2 else 1
    idx = tuple(idx)
    v = {}
    for b in range(S.dim):
        val = X(idx + (b,))
        if val:
            t = F.value(val)
            if t:
                v[b] = sign * t
    return F.solve_pairing(v)


def _derivation_transpose(P: MultiDerivation, s: tuple) -> dict:
    """For the derivation b -> P(e_s, e_b): {c: {b: coefficient of e_c in P(e_s, e_b)}}."""
    cache = P._cache.setdefault("dt", {})
    out = cache.get(s)
    if out is None:
        out = {}
        for b in range(1, P.algebra.dim):
            for c, x in md_at(P, s + (b,)).items():
                out.setdefault(c, {})[b] = x
        cache[s] = out
    return out


def _delta_wedge_part(F: FrobeniusForm, P: MultiDerivation, Q: MultiDerivation, idx: tuple, part: int) -> dict:
    """Delta(P ^_part Q)(idx), same value as delta_multilinear on wedge_parts.

    With the last slot e_b held by P (part 1) or Q (part 2), the pairing
    lambda(D(e_b) y) for a derivation D = P(e_s, -) equals sum_c (G y)_c D(e_b)_c,
    so all b are handled by one pass over the cached transpose of D.
    """
    m, n = P.degree, Q.degree
    L = len(idx)
    gram = F.gram
    v: dict = {}
    if part == 1:
        if m == 0:
            return {}
        flip = -1 if n % 2 else 1
        for pos, rest, sign in _shuffles(L, m - 1):
            y = md_at(Q, tuple(idx[i] for i in rest))
            if not y:
                continue
            dt = _derivation_transpose(P, tuple(idx[i] for i in pos))
            for c, g in gram.apply(y).items():
                row = dt.get(c)
                if row:
                    axpy(v, sign * flip * g, row)
    else:
        if n == 0:
            return {}
        for pos, rest, sign in _shuffles(L, m):
            y = md_at(P, tuple(idx[i] for i in pos))
            if not y:
                continue
            dt = _derivation_transpose(Q, tuple(idx[i] for i in rest))
            for c, g in gram.apply(y).items():
                row = dt.get(c)
                if row:
                    axpy(v, sign * g, row)
    if L % 2:
        v = {b: -x for b, x in v.items()}
    return F.solve_pairing(v)


# -- operations returning multiderivations ------------------------------------


def _basis_index_of_generators(S: PoissonAlgebra, I) -> tuple | None:
    out = []
    for t in I:
        g = S.generators[t]
        if not g:
            return None
        out.append(next(iter(g)))
    return tuple(out)


def assemble(S: PoissonAlgebra, k: int, fn: Callable) -> MultiDerivation:
    """The multiderivation with values fn(x_J) on generator tuples J; S-linearity asserted."""
    space = multiderivation_space(S, k)
    if k > S.nvars or k < 0:
        return space.zero()
    N = S.dim
    v: dict = {}
    for g, J in enumerate(subsets(S.nvars, k)):
        idx = _basis_index_of_generators(S, J)
        if idx is None:
            continue
        for j, x in fn(idx).items():
            if x:
                v[g * N + j] = x
    if not space.contains(v):
        raise BVConsistencyError(f"assembled values in degree {k} are not S-linear")
    return space.element(v)


def wedge_md(P: MultiDerivation, Q: MultiDerivation) -> MultiDerivation:
    S = P.algebra
    return assemble(S, P.degree + Q.degree, _wedge_fn(P, Q))


def schouten(P: MultiDerivation, Q: MultiDerivation) -> MultiDerivation:
    """[P, Q] = P o Q - (-1)^((m-1)(n-1)) Q o P."""
    S = P.algebra
    m, n = P.degree, Q.degree
    L = m + n - 1
    if L < 0:
        return multiderivation_space(S, 0).zero()
    pq, qp = circ(P, Q), circ(Q, P)
    sign = -1 if ((m - 1) * (n - 1)) % 2 else 1

    def fn(idx):
        out = dict(pq(idx))
        return axpy(out, -sign, qp(idx))

    return assemble(S, L, fn)


def bv_delta(S: PoissonAlgebra, F: FrobeniusForm, P: MultiDerivation) -> MultiDerivation:
    """<Delta(P)(a_1..a_{m-1}), a_m> = (-1)^(m-1) <P(a_1..a_m), 1>; zero on degree 0."""
    m = P.degree
    if m == 0:
        return hom_space(S, left_regular(S), -1).zero()
    cached = P._cache.get(("delta", id(F)))
    if cached is not None:
        return cached
    X = as_multilinear(P)
    R = assemble(S, m - 1, lambda idx: delta_multilinear(F, X, idx))
    P._cache[("delta", id(F))] = R
    return R


def delta_via_star(S: PoissonAlgebra, F: FrobeniusForm, P: MultiDerivation) -> MultiDerivation:
    """Delta through the square star(P) -> d*(star(P)) -> star^{-1} in degree m-1.

    star(P)(s dx_I) = lambda(s P(dx_I)); pulling back along the de Rham
    differential gives a functional on Omega^{m-1}, and inverting star solves
    lambda(e_j R(dx_I)) = value for R(dx_I) through the Gram matrix.
    """
    m = P.degree
    if m == 0:
        return hom_space(S, left_regular(S), -1).zero()
    N = S.dim
    om = kaehler_module(S, m)

    def star_p(w: dict):
        tot = 0
        for c, x in w.items():
            g, j = divmod(c, N)
            val = P.space.value(P.values, g)
            if val:
                tot = tot + x * F.value(S.mul({j: 1}, val))
        return tot

    for r in om.quotient.relation_basis:
        if star_p(r):
            raise BVConsistencyError("star(P) does not vanish on the relations of Omega^m")
    space = multiderivation_space(S, m - 1)
    v: dict = {}
    for g in range(len(subsets(S.nvars, m - 1))):
        vals = {}
        for j in range(N):
            t = star_p(de_rham_ambient(S, {g * N + j: S.field(1)}, m - 1))
            if t:
                vals[j] = t
        for j, x in F.solve_pairing(vals).items():
            v[g * N + j] = x
    if not space.contains(v):
        raise BVConsistencyError("star is not invertible on the pulled-back functional")
    return space.element(v)


@dataclass
class Modular:
    """Delta(pi), the modular derivation."""

    derivation: MultiDerivation
    rendered: str


def modular_vector(S: PoissonAlgebra, F: FrobeniusForm) -> Modular:
    D = bv_delta(S, F, bivector(S))
    return Modular(D, D.format())


def delta_matrix(S: PoissonAlgebra, F: FrobeniusForm, k: int) -> Matrix:
    """Delta_k: X^k -> X^{k-1} on the Hom bases."""
    src = multiderivation_space(S, k)
    tgt = multiderivation_space(S, k - 1)
    if k <= 0:
        return Matrix.zero(tgt.dim, src.dim, S.field)
    cols = [tgt.coords(bv_delta(S, F, src.basis_element(i)).values) for i in range(src.dim)]
    return Matrix.from_columns(cols, tgt.dim, S.field)


# -- unimodularity ---------------------------------------------------------------


@dataclass
class UnimodularityReport:
    unimodular: bool
    criteria: dict  # name -> verdict
    modular: Modular
    witnesses: dict = field(default_factory=dict)


def unimodularity(S: PoissonAlgebra, F: FrobeniusForm) -> UnimodularityReport:
    """Three independent verdicts: Delta(pi) = 0, the pairing identity, sigma a module map."""
    mod = modular_vector(S, F)
    N = S.dim
    wit = {}
    c1 = mod.derivation.is_zero()
    if not c1:
        wit["delta_pi"] = mod.rendered

    c2 = True
    G = F.gram
    for a, b, c in itertools.product(range(N), repeat=3):
        lhs = F.value(S.mul(S.brk[a][b], {c: 1}))
        rhs = F.value(S.mul({b: 1}, S.brk[c][a]))
        if lhs != rhs:
            c2 = False
            wit["pairing"] = (S.basis_name(a), S.basis_name(b), S.basis_name(c))
            break

    c3 = True
    reg, star = regular_module(S), dual_regular_module(S)
    for s in range(N):
        if G @ reg.brk[s] != star.brk[s] @ G:
            c3 = False
            wit["sigma_module_map"] = S.basis_name(s)
            break
    crit = {"delta_pi": c1, "pairing": c2, "sigma_module_map": c3}
    if len(set(crit.values())) != 1:
        raise BVConsistencyError(f"unimodularity criteria disagree: {crit}")
    return UnimodularityReport(c1, crit, mod, wit)


# -- identity sweeps -------------------------------------------------------------


@dataclass
class BVReport:
    checks: ValidationReport
    modular: str
    max_total_degree: int

    @property
    def ok(self) -> bool:
        return self.checks.ok


def _sign(e: int) -> int:
    return -1 if e % 2 else 1


def _basis_tuples(S: PoissonAlgebra, L: int):
    return itertools.combinations(range(1, S.dim), L)


def eqxx1_sides(S, F, P, Q) -> tuple:
    """([P,Q], -(-1)^((m-1)n)(Delta(P^Q) - Delta(P)^Q - (-1)^m P^Delta(Q)))."""
    m, n = P.degree, Q.degree
    lhs = schouten(P, Q)
    L = m + n - 1
    space = multiderivation_space(S, max(L, 0))
    rhs: dict = {}
    if m + n >= 1:
        axpy(rhs, 1, bv_delta(S, F, wedge_md(P, Q)).values)
    if m >= 1:
        axpy(rhs, -1, wedge_md(bv_delta(S, F, P), Q).values)
    if n >= 1:
        axpy(rhs, -_sign(m), wedge_md(P, bv_delta(S, F, Q)).values)
    s = -_sign((m - 1) * n)
    rhs = {c: s * x for c, x in rhs.items()}
    if L < 0:
        return lhs, space.zero()
    return lhs, space.element(rhs)


def eqxx2_at(S, F, P, Q, idx) -> dict:
    """P o Q + (-1)^((m-1)n)(Delta(P ^_1 Q) - Delta(P) ^ Q) at idx."""
    m, n = P.degree, Q.degree
    idx = tuple(idx)
    out = _circ_at(P, Q, idx)
    if m == 0:
        return out
    t = dict(_delta_wedge_part(F, P, Q, idx, 1))
    axpy(t, -1, _wedge_at(bv_delta(S, F, P), Q, idx))
    return axpy(out, _sign((m - 1) * n), t)


def eqxx3_at(S, F, P, Q, idx) -> dict:
    """Q o P - (-1)^(m-1) Delta(P ^_2 Q) - P ^ Delta(Q) at idx."""
    m, n = P.degree, Q.degree
    idx = tuple(idx)
    out = _circ_at(Q, P, idx) if n >= 1 else {}
    axpy(out, -_sign(m - 1), _delta_wedge_part(F, P, Q, idx, 2))
    if n >= 1:
        axpy(out, -1, _wedge_at(P, bv_delta(S, F, Q), idx))
    return out


def bv_identity_check(S: PoissonAlgebra, F: FrobeniusForm, max_total_degree: int | None = None) -> BVReport:
    """eqxx1 on generator tuples, eqxx2/eqxx3 on basis tuples, Delta^2 = 0; all basis pairs."""
    n = S.nvars
    D = n + 1 if max_total_degree is None else max_total_degree
    rep = ValidationReport()
    bases = {k: [multiderivation_space(S, k).basis_element(i) for i in range(multiderivation_space(S, k).dim)]
             for k in range(n + 1)}
    pairs = [(m, q) for m in range(n + 1) for q in range(n + 1) if m + q <= D]

    count, fail = 0, None
    for k in range(n + 1):
        for i, P in enumerate(bases[k]):
            count += 1
            if k >= 2 and not bv_delta(S, F, bv_delta(S, F, P)).is_zero():
                fail = fail or (k, i)
    rep.add("delta_squared", fail is None, fail, count)

    for name in ("eqxx1", "eqxx2", "eqxx3"):
        count, fail = 0, None
        for m, q in pairs:
            L = m + q - 1
            if L < 0:
                continue
            tuples = list(_basis_tuples(S, L)) if name != "eqxx1" else None
            for i, P in enumerate(bases[m]):
                for j, Q in enumerate(bases[q]):
                    count += 1
                    if fail is not None:
                        continue
                    if name == "eqxx1":
                        lhs, rhs = eqxx1_sides(S, F, P, Q)
                        if lhs.values != rhs.values:
                            fail = {"P": (m, i), "Q": (q, j)}
                        continue
                    at = eqxx2_at if name == "eqxx2" else eqxx3_at
                    for idx in tuples:
                        if at(S, F, P, Q, idx):
                            fail = {"P": (m, i), "Q": (q, j), "args": [S.basis_name(a) for a in idx]}
                            break
        rep.add(name, fail is None, fail, count)
    return BVReport(rep, modular_vector(S, F).rendered, D)


# -- induced operator on cohomology -----------------------------------------------


@dataclass
class CohomologyBVReport:
    checks: ValidationReport
    dims: list
    induced: list  # induced[k]: Matrix HP^k -> HP^{k-1} in representative coordinates


def _class_coords(reps: list, image: RowSpace, v: dict) -> dict | None:
    """Coordinates of v modulo image in the span of reps, or None outside that span."""
    n = image.ncols
    tagged = RowSpace(n + len(reps), image.field)
    for r in image.rows():
        tagged.add(dict(r))
    for i, r in enumerate(reps):
        row = dict(r)
        row[n + i] = image.field(1)
        tagged.add(row)
    red = tagged.reduce(dict(v))
    if any(c < n for c in red):
        return None
    return {c - n: -x for c, x in red.items()}


def cohomology_bv(S: PoissonAlgebra, F: FrobeniusForm) -> CohomologyBVReport:
    uni = unimodularity(S, F)
    if not uni.unimodular:
        raise NotUnimodularError(f"the algebra is not unimodular (Delta(pi) = {uni.modular.rendered})")
    n = S.nvars
    Lreg = left_regular(S)
    rep = ValidationReport()
    delta = {k: coboundary(S, Lreg, k) for k in range(-1, n + 1)}
    Dl = {k: delta_matrix(S, F, k) for k in range(0, n + 2)}
    for k in range(0, n + 1):
        lhs = Dl[k + 1] @ delta[k]
        if k >= 1:
            lhs = lhs + delta[k - 1] @ Dl[k]
        ok = lhs.is_zero()
        rep.add(f"anticommute_{k}", ok, None if ok else k)

    coh = poisson_cohomology(S)
    images = {}
    for k in range(n + 1):
        rs = RowSpace(multiderivation_space(S, k).dim, S.field)
        if k >= 1:
            rs.extend(delta[k - 1].columns)
        images[k] = rs
    induced = []
    ok_all, wit = True, None
    for k in range(n + 1):
        if k == 0:
            induced.append(Matrix.zero(0, coh.dims[0], S.field))
            continue
        cols = []
        for r in coh.representatives[k]:
            img = Dl[k].apply(r)
            c = _class_coords(coh.representatives[k - 1], images[k - 1], img) if img else {}
            if c is None:
                ok_all, wit = False, {"degree": k}
                c = {}
            cols.append(c)
        induced.append(Matrix.from_columns(cols, coh.dims[k - 1], S.field))
    rep.add("induced_well_defined", ok_all, wit)
    sq = all((induced[k - 1] @ induced[k]).is_zero() for k in range(2, n + 1))
    rep.add("induced_delta_squared", sq)

    count, fail = 0, None
    for m in range(n + 1):
        for q in range(n + 1):
            L = m + q - 1
            if L < 0 or L > n:
                continue
            sp_m, sp_q = multiderivation_space(S, m), multiderivation_space(S, q)
            for i, r1 in enumerate(coh.representatives[m]):
                for j, r2 in enumerate(coh.representatives[q]):
                    count += 1
                    lhs, rhs = eqxx1_sides(S, F, sp_m.element(sp_m.vector(r1)), sp_q.element(sp_q.vector(r2)))
                    diff = multiderivation_space(S, L).coords(axpy(dict(lhs.values), -1, rhs.values))
                    if not images[L].contains(diff) and fail is None:
                        fail = {"P": (m, i), "Q": (q, j)}
    rep.add("eqxx1_mod_coboundaries", fail is None, fail, count)
    return CohomologyBVReport(rep, coh.dims, induced)


def coboundary_of(S: PoissonAlgebra, P: MultiDerivation) -> MultiDerivation:
    return apply_coboundary(S, P)
