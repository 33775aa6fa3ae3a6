"""Right and left Poisson modules given by action matrices.

``act[i]`` is the matrix of m -> m.e_i (right) or e_i.m (left); ``brk[i]`` is
m -> {m, e_i}_M (right) or {e_i, m}_M (left).  Matrices act on column
coordinate vectors.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

from .algebra import PoissonAlgebra
from .linalg import Matrix, SingularMatrixError, inverse, lincomb
from .reports import ValidationReport

RIGHT, LEFT = "right", "left"


class ModuleError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class PoissonModule:
    algebra: PoissonAlgebra
    side: str
    act: tuple
    brk: tuple
    labels: tuple
    name: str = "M"

    @property
    def dim(self) -> int:
        return len(self.labels)

    def act_of(self, s: dict) -> Matrix:
        if not s:
            return Matrix.zero(self.dim, self.dim, self.algebra.field)
        return lincomb(s, self.act)

    def brk_of(self, s: dict) -> Matrix:
        if not s:
            return Matrix.zero(self.dim, self.dim, self.algebra.field)
        return lincomb(s, self.brk)

    @cached_property
    def act_columns(self) -> tuple:
        return tuple(m.columns for m in self.act)

    @cached_property
    def brk_columns(self) -> tuple:
        return tuple(m.columns for m in self.brk)

    def act_on(self, s: dict, m: dict) -> dict:
        """The module action of s on the vector m (m.s or s.m by side)."""
        out: dict = {}
        cols = self.act_columns
        for i, x in s.items():
            ci = cols[i]
            for j, y in m.items():
                c = ci[j]
                if c:
                    for k, z in c.items():
                        nv = out.get(k, 0) + x * y * z
                        if nv:
                            out[k] = nv
                        else:
                            del out[k]
        return out

    def brk_on(self, s: dict, m: dict) -> dict:
        """{m, s}_M for right modules, {s, m}_M for left modules."""
        out: dict = {}
        cols = self.brk_columns
        for i, x in s.items():
            ci = cols[i]
            for j, y in m.items():
                c = ci[j]
                if c:
                    for k, z in c.items():
                        nv = out.get(k, 0) + x * y * z
                        if nv:
                            out[k] = nv
                        else:
                            del out[k]
        return out


def _from_columns(S, fn) -> tuple:
    N = S.dim
    return tuple(Matrix.from_columns([fn(s, j) for j in range(N)], N, S.field) for s in range(N))


def regular_module(S: PoissonAlgebra, side: str = RIGHT) -> PoissonModule:
    """S over itself: act = multiplication, brk[s] = {-, s} (right) or {s, -} (left)."""
    act = _from_columns(S, lambda s, j: S.mult[j][s])
    if side == RIGHT:
        brk = _from_columns(S, lambda s, j: S.brk[j][s])
    elif side == LEFT:
        brk = _from_columns(S, lambda s, j: S.brk[s][j])
    else:
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    labels = tuple(S.basis_name(j) for j in range(S.dim))
    return PoissonModule(S, side, act, brk, labels, "S")


def dual_module(M: PoissonModule) -> PoissonModule:
    """M* with (s.a)(m) = a(m.s) and {s, a}(m) = a({m, s}); the side flips."""
    side = LEFT if M.side == RIGHT else RIGHT
    labels = tuple(_dual_label(lab) for lab in M.labels)
    name = M.name[:-1] if M.name.endswith("*") else M.name + "*"
    return PoissonModule(M.algebra, side, tuple(a.T for a in M.act), tuple(b.T for b in M.brk), labels, name)


def _dual_label(label: str) -> str:
    if label.startswith("(") and label.endswith(")^"):
        return label[1:-2]
    return f"({label})^"


def dual_regular_module(S: PoissonAlgebra) -> PoissonModule:
    """S* as a right Poisson module, dual to the left regular module."""
    return dual_module(regular_module(S, LEFT))


def twisted_module(S: PoissonAlgebra, sigma: Matrix) -> PoissonModule:
    """S_sigma: right structure on S transported from S* along sigma: S -> S*."""
    N = S.dim
    if (sigma.nrows, sigma.ncols) != (N, N):
        raise ModuleError("sigma has the wrong shape")
    try:
        sigma_inv = inverse(sigma)
    except SingularMatrixError:
        raise ModuleError("sigma is not invertible") from None
    star = dual_regular_module(S)
    reg = regular_module(S, RIGHT)
    for s in range(N):
        if sigma @ reg.act[s] != star.act[s] @ sigma:
            raise ModuleError(f"sigma is not S-linear (fails at {S.basis_name(s)})")
    brk = tuple(sigma_inv @ star.brk[s] @ sigma for s in range(N))
    return PoissonModule(S, RIGHT, reg.act, brk, reg.labels, "S_sigma")


def validate_module(S: PoissonAlgebra, M: PoissonModule) -> ValidationReport:
    """Module axioms (1)-(4) on all basis pairs, mirrored for left modules."""
    rep = ValidationReport()
    N = S.dim
    field = S.field
    ident = Matrix.identity(M.dim, field)
    act, brk = M.act, M.brk
    pairs = list(itertools.product(range(N), repeat=2))
    name = S.basis_name

    def run(label, pred):
        for c, (a, b) in enumerate(pairs, start=1):
            if not pred(a, b):
                rep.add(label, False, (name(a), name(b)), c)
                return
        rep.add(label, True, None, len(pairs))

    def module_ok(a, b):
        if a == 0 and b == 0 and act[0] != ident:
            return False
        return act[a] @ act[b] == M.act_of(S.mult[a][b])

    run("commutative_module", module_ok)
    if M.side == RIGHT:
        run("lie_module", lambda a, b: brk[b] @ brk[a] - brk[a] @ brk[b] == M.brk_of(S.brk[a][b]))
        run("compatibility_3", lambda a, b: brk[b] @ act[a] == act[a] @ brk[b] + M.act_of(S.brk[a][b]))
    else:
        run("lie_module", lambda a, b: brk[a] @ brk[b] - brk[b] @ brk[a] == M.brk_of(S.brk[a][b]))
        run("compatibility_3", lambda a, b: brk[b] @ act[a] == act[a] @ brk[b] + M.act_of(S.brk[b][a]))
    run("compatibility_4", lambda a, b: M.brk_of(S.mult[a][b]) == act[b] @ brk[a] + act[a] @ brk[b])
    return rep
