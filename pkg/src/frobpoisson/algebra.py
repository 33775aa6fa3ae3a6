"""Finite-dimensional Poisson algebras k[x_1..x_n]/(monomials).

A :class:`Presentation` names the variables, the monomial relations, the
bracket on generator pairs and the Frobenius functional.  :func:`build_algebra`
turns it into structure constants on the standard monomials.

Elements are sparse coordinate dicts ``{basis_index: scalar}``; the dense
helpers :func:`multiply` and :func:`bracket` accept and return lists.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from functools import cached_property

from .fields import QQ, Field, FieldError, parse_field
from .linalg import as_sparse, axpy, dense
from .reports import ValidationReport

Monomial = tuple  # exponent vector
Poly = dict  # Monomial -> scalar


class PresentationError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


# -- polynomials in the ambient polynomial ring ------------------------------


def divides(r: Monomial, m: Monomial) -> bool:
    return all(a <= b for a, b in zip(r, m))


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def poly_add_to(dst: Poly, c, m: Monomial) -> None:
    v = dst.get(m, 0) + c
    if v:
        dst[m] = v
    else:
        dst.pop(m, None)


def normal_form(p: Poly, relations) -> Poly:
    return {m: c for m, c in p.items() if c and not any(divides(r, m) for r in relations)}


def poly_bracket(alpha: Monomial, beta: Monomial, table: dict) -> Poly:
    """Biderivation extension: {x^a, x^b} = sum a_i b_j x^(a+b-e_i-e_j) {x_i, x_j}."""
    out: Poly = {}
    n = len(alpha)
    for i in range(n):
        if not alpha[i]:
            continue
        for j in range(n):
            if not beta[j] or i == j:
                continue
            g = _generator_bracket(table, i, j)
            if not g:
                continue
            rest = list(mono_mul(alpha, beta))
            rest[i] -= 1
            rest[j] -= 1
            coef = alpha[i] * beta[j]
            for m, c in g.items():
                poly_add_to(out, coef * c, mono_mul(tuple(rest), m))
    return out


def _generator_bracket(table: dict, i: int, j: int) -> Poly:
    if i < j:
        return table.get((i, j), {})
    return {m: -c for m, c in table.get((j, i), {}).items()}


# -- presentation -------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Presentation:
    name: str
    variables: tuple
    relations: tuple
    brackets: dict  # (i, j) with i < j -> Poly
    frobenius: object = "socle"  # "socle" or {Monomial: scalar}
    field: Field = QQ

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def format_monomial(self, m: Monomial) -> str:
        return format_monomial(m, self.variables)

    def format_poly(self, p: Poly) -> str:
        return format_poly(p, self.variables)

    def to_text(self) -> str:
        lines = [f"algebra {self.name}", f"field {self.field.name}", "vars " + " ".join(self.variables)]
        for r in self.relations:
            lines.append(f"rel {self.format_monomial(r)}")
        for (i, j), p in sorted(self.brackets.items()):
            lines.append(f"bracket {self.variables[i]} {self.variables[j]} = {self.format_poly(p)}")
        if self.frobenius == "socle":
            lines.append("frobenius socle")
        else:
            terms = ", ".join(f"{self.format_monomial(m)}:{c}" for m, c in sorted(self.frobenius.items()))
            lines.append(f"frobenius {terms}")
        return "\n".join(lines) + "\n"


def format_monomial(m: Monomial, names) -> str:
    parts = []
    for name, e in zip(names, m):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts) if parts else "1"


def format_poly(p, names, order=None) -> str:
    """Signed sum of terms; ``order`` fixes the term order (defaults to sorted)."""
    items = [(m, c) for m, c in (p.items() if isinstance(p, dict) else p) if c]
    if order is not None:
        items.sort(key=lambda mc: order(mc[0]))
    else:
        items.sort(key=lambda mc: (sum(mc[0]), tuple(-e for e in mc[0])))
    if not items:
        return "0"
    out = ""
    for m, c in items:
        mono = m if isinstance(m, str) else format_monomial(m, names)
        s = str(c)
        neg = s.startswith("-")
        mag = s[1:] if neg else s
        if mono == "1":
            body = mag
        elif mag == "1":
            body = mono
        else:
            body = f"{mag}*{mono}"
        if not out:
            out = ("-" if neg else "") + body
        else:
            out += (" - " if neg else " + ") + body
    return out


_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|([A-Za-z_][A-Za-z_0-9]*)|(\^)|(\*)|(\+)|(-))")


def _tokenize(text: str, line: int | None):
    pos, out = 0, []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise PresentationError(f"unexpected character {text[pos:].strip()[:1]!r}", line)
        pos = m.end()
        num, ident, caret, star, plus, minus = m.groups()
        if num is not None:
            out.append(("num", num))
        elif ident is not None:
            out.append(("id", ident))
        elif caret:
            out.append(("^", caret))
        elif star:
            out.append(("*", star))
        elif plus:
            out.append(("+", plus))
        else:
            out.append(("-", minus))
    return out


def parse_polynomial(text: str, variables, field: Field = QQ, line: int | None = None) -> Poly:
    """Sum of terms: optional integer coefficient, ``*``-separated powers ``x^k``."""
    toks = _tokenize(text, line)
    if not toks:
        raise PresentationError("empty polynomial", line)
    index = {v: i for i, v in enumerate(variables)}
    n = len(variables)
    out: Poly = {}
    i = 0
    first = True
    while i < len(toks):
        sign = 1
        if toks[i][0] in "+-":
            if toks[i][0] == "+" and first:
                raise PresentationError("leading '+'", line)
            sign = -1 if toks[i][0] == "-" else 1
            i += 1
        elif not first:
            raise PresentationError(f"expected '+' or '-' before {toks[i][1]!r}", line)
        first = False
        coef = field(sign)
        mono = [0] * n
        expect_factor = True
        while expect_factor:
            if i >= len(toks):
                raise PresentationError("dangling operator", line)
            kind, val = toks[i]
            if kind == "num":
                coef = coef * field(val)
                i += 1
            elif kind == "id":
                if val not in index:
                    raise PresentationError(f"unknown variable {val!r}", line)
                i += 1
                e = 1
                if i < len(toks) and toks[i][0] == "^":
                    if i + 1 >= len(toks) or toks[i + 1][0] != "num" or "/" in toks[i + 1][1]:
                        raise PresentationError("exponent must be a nonnegative integer", line)
                    e = int(toks[i + 1][1])
                    i += 2
                mono[index[val]] += e
            else:
                raise PresentationError(f"unexpected {val!r}", line)
            if i < len(toks) and toks[i][0] == "*":
                i += 1
            else:
                expect_factor = False
        poly_add_to(out, coef, tuple(mono))
    return out


def parse_monomial(text: str, variables, line: int | None = None) -> Monomial:
    p = parse_polynomial(text, variables, QQ, line)
    if len(p) != 1 or list(p.values())[0] != 1:
        raise PresentationError(f"expected a monomial, got {text.strip()!r}", line)
    return next(iter(p))


def make_presentation(
    name: str,
    variables,
    relations,
    brackets: dict,
    frobenius="socle",
    field: Field = QQ,
) -> Presentation:
    """Validate and normalize; ``brackets`` maps (i, j) pairs (any order) to polys."""
    variables = tuple(variables)
    n = len(variables)
    if n == 0:
        raise PresentationError("no variables declared")
    if len(set(variables)) != n:
        raise PresentationError("duplicate variable names")
    if getattr(field, "characteristic", 0) == 2:
        raise PresentationError("characteristic 2 is not supported")
    rels = []
    for r in relations:
        r = tuple(int(e) for e in r)
        if len(r) != n or any(e < 0 for e in r) or not any(r):
            raise PresentationError(f"bad relation monomial {r}")
        if r not in rels:
            rels.append(r)
    for t in range(n):
        if not any(r[t] > 0 and sum(r) == r[t] for r in rels):
            raise PresentationError(f"variable {variables[t]!r} is not bounded by a pure-power relation")
    table: dict = {}
    for (i, j), p in brackets.items():
        if i == j:
            raise PresentationError(f"bracket of {variables[i]!r} with itself")
        p = {tuple(m): field(c) for m, c in p.items()}
        p = normal_form({m: c for m, c in p.items() if c}, rels)
        key, val = ((i, j), p) if i < j else ((j, i), {m: -c for m, c in p.items()})
        if key in table:
            raise PresentationError(f"bracket {variables[key[0]]} {variables[key[1]]} given twice")
        if val:
            table[key] = val
        else:
            table[key] = {}
    table = {k: v for k, v in table.items() if v}
    if frobenius != "socle":
        fro = {}
        for m, c in dict(frobenius).items():
            m = tuple(m)
            if any(divides(r, m) for r in rels):
                raise PresentationError(f"frobenius monomial {format_monomial(m, variables)} is zero in the algebra")
            c = field(c)
            if c:
                fro[m] = c
        frobenius = fro
    return Presentation(name, variables, tuple(rels), table, frobenius, field)


def parse_presentation(text: str, field: Field | None = None) -> Presentation:
    """Parse the line-oriented ``.fp`` format; ``field`` overrides the file's field."""
    name = "unnamed"
    fld: Field = QQ
    variables = None
    rels, brackets, fro = [], {}, "socle"
    seen_fro = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        rest = rest.strip()
        if head == "algebra":
            if not rest or len(rest.split()) != 1:
                raise PresentationError("usage: algebra <name>", lineno)
            name = rest
        elif head == "field":
            try:
                fld = parse_field(rest)
            except FieldError as exc:
                raise PresentationError(str(exc), lineno) from None
        elif head == "vars":
            if variables is not None:
                raise PresentationError("vars declared twice", lineno)
            names = rest.split()
            if not names or not all(re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", v) for v in names):
                raise PresentationError("usage: vars <ident>+", lineno)
            variables = tuple(names)
        elif head == "rel":
            _need_vars(variables, lineno)
            rels.append((parse_monomial(rest, variables, lineno), lineno))
        elif head == "bracket":
            _need_vars(variables, lineno)
            lhs, eq, rhs = rest.partition("=")
            parts = lhs.split()
            if not eq or len(parts) != 2:
                raise PresentationError("usage: bracket <v> <w> = <polynomial>", lineno)
            for v in parts:
                if v not in variables:
                    raise PresentationError(f"bracket arguments must be variables, got {v!r}", lineno)
            i, j = variables.index(parts[0]), variables.index(parts[1])
            if i == j:
                raise PresentationError("bracket of a variable with itself", lineno)
            key = (min(i, j), max(i, j))
            if key in brackets:
                raise PresentationError("bracket given twice", lineno)
            brackets[key] = (i, j, rhs, lineno)
        elif head == "frobenius":
            _need_vars(variables, lineno)
            if seen_fro:
                raise PresentationError("frobenius given twice", lineno)
            seen_fro = True
            if rest == "socle":
                fro = "socle"
            else:
                fro = {}
                for item in rest.split(","):
                    mono, colon, coef = item.partition(":")
                    if not colon or not re.fullmatch(r"\s*-?\d+(/\d+)?\s*", coef):
                        raise PresentationError("usage: frobenius <monomial>:<int>[, ...]", lineno)
                    m = parse_monomial(mono, variables, lineno)
                    if m in fro:
                        raise PresentationError("monomial repeated in frobenius", lineno)
                    fro[m] = coef.strip()
        else:
            raise PresentationError(f"unknown directive {head!r}", lineno)
    if variables is None:
        raise PresentationError("missing 'vars' line")
    if field is not None:
        fld = field
    if fld.characteristic == 2:
        raise PresentationError("characteristic 2 is not supported")
    try:
        polys = {}
        for key, (i, j, rhs, lineno) in brackets.items():
            p = parse_polynomial(rhs, variables, fld, lineno)
            polys[(i, j)] = p
        return make_presentation(name, variables, [r for r, _ in rels], polys, fro, fld)
    except FieldError as exc:
        raise PresentationError(str(exc)) from None


def _need_vars(variables, lineno):
    if variables is None:
        raise PresentationError("'vars' must come first", lineno)


# -- the algebra ------------------------------------------------------------


def _deglex_key(m: Monomial):
    return (sum(m), tuple(-e for e in m))


@dataclass(frozen=True, eq=False)
class PoissonAlgebra:
    presentation: Presentation
    basis: tuple
    mult: tuple  # mult[i][j] -> sparse element e_i * e_j
    brk: tuple  # brk[i][j] -> sparse element {e_i, e_j}
    partials: tuple  # partials[j][t] -> sparse element d(e_j)/dx_t
    index: dict = field(repr=False, default_factory=dict)

    @property
    def field(self) -> Field:
        return self.presentation.field

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def nvars(self) -> int:
        return self.presentation.nvars

    @property
    def name(self) -> str:
        return self.presentation.name

    @property
    def names(self) -> tuple:
        return self.presentation.variables

    @cached_property
    def generators(self) -> tuple:
        """Sparse elements x_1..x_n (empty when x_t is itself a relation)."""
        out = []
        for t in range(self.nvars):
            e = tuple(1 if s == t else 0 for s in range(self.nvars))
            out.append({self.index[e]: self.field(1)} if e in self.index else {})
        return tuple(out)

    def basis_name(self, j: int) -> str:
        return format_monomial(self.basis[j], self.names)

    def unit(self) -> dict:
        return {0: self.field(1)}

    def basis_element(self, j: int) -> dict:
        return {j: self.field(1)}

    def element(self, p) -> dict:
        """Sparse element from a polynomial dict or a polynomial string."""
        if isinstance(p, str):
            p = parse_polynomial(p, self.names, self.field)
        out: dict = {}
        for m, c in p.items():
            j = self.index.get(tuple(m))
            if j is not None and c:
                axpy(out, 1, {j: self.field(c)})
        return out

    def mul(self, a: dict, b: dict) -> dict:
        out: dict = {}
        mult = self.mult
        for i, x in a.items():
            row = mult[i]
            for j, y in b.items():
                prod = row[j]
                if prod:
                    axpy(out, x * y, prod)
        return out

    def br(self, a: dict, b: dict) -> dict:
        out: dict = {}
        brk = self.brk
        for i, x in a.items():
            row = brk[i]
            for j, y in b.items():
                v = row[j]
                if v:
                    axpy(out, x * y, v)
        return out

    def partial(self, a: dict, t: int) -> dict:
        out: dict = {}
        for j, x in a.items():
            d = self.partials[j][t]
            if d:
                axpy(out, x, d)
        return out

    def format(self, a: dict) -> str:
        """Signed monomial sum in basis order."""
        items = [(self.basis_name(j), a[j]) for j in sorted(a) if a[j]]
        return format_poly(items, self.names, order=lambda _m: 0)


def standard_monomials(P: Presentation) -> list:
    bounds = []
    for t in range(P.nvars):
        bounds.append(min(r[t] for r in P.relations if r[t] > 0 and sum(r) == r[t]))
    out = [m for m in itertools.product(*(range(b) for b in bounds)) if not any(divides(r, m) for r in P.relations)]
    out.sort(key=_deglex_key)
    return out


def build_algebra(P: Presentation) -> PoissonAlgebra:
    F = P.field
    basis = tuple(standard_monomials(P))
    index = {m: i for i, m in enumerate(basis)}
    n = P.nvars

    def to_sparse(poly: Poly) -> dict:
        out: dict = {}
        for m, c in poly.items():
            j = index.get(m)
            if j is not None:
                c = F(c)
                if c:
                    axpy(out, 1, {j: c})
        return out

    mult = tuple(tuple(to_sparse({mono_mul(a, b): 1}) for b in basis) for a in basis)
    brk = tuple(tuple(to_sparse(poly_bracket(a, b, P.brackets)) for b in basis) for a in basis)
    partials = []
    for a in basis:
        row = []
        for t in range(n):
            if a[t] == 0:
                row.append({})
            else:
                m = list(a)
                m[t] -= 1
                row.append(to_sparse({tuple(m): a[t]}))
        partials.append(tuple(row))
    return PoissonAlgebra(P, basis, mult, brk, tuple(partials), index)


def load_algebra(text: str, field: Field | None = None) -> PoissonAlgebra:
    return build_algebra(parse_presentation(text, field))


# -- dense wrappers ---------------------------------------------------------


def multiply(S: PoissonAlgebra, a, b) -> list:
    return dense(S.mul(as_sparse(a), as_sparse(b)), S.dim)


def bracket(S: PoissonAlgebra, a, b) -> list:
    return dense(S.br(as_sparse(a), as_sparse(b)), S.dim)


# -- validation -------------------------------------------------------------


def validate_algebra(S: PoissonAlgebra, all_triples: bool = True) -> ValidationReport:
    """Check every Poisson axiom on basis elements; failures carry a witness."""
    rep = ValidationReport()
    N = S.dim
    e = [S.basis_element(i) for i in range(N)]
    name = S.basis_name

    def first_failure(cases, pred):
        count = 0
        for case in cases:
            count += 1
            if not pred(*case):
                return tuple(name(i) for i in case), count
        return None, count

    pairs = list(itertools.product(range(N), repeat=2))
    triples = list(itertools.product(range(N), repeat=3))

    w, c = first_failure(pairs, lambda i, j: S.mult[i][j] == S.mult[j][i])
    rep.add("commutativity", w is None, w, c)
    w, c = first_failure(triples, lambda i, j, k: S.mul(S.mult[i][j], e[k]) == S.mul(e[i], S.mult[j][k]))
    rep.add("associativity", w is None, w, c)
    w, c = first_failure([(i,) for i in range(N)], lambda i: S.mult[0][i] == e[i] and S.mult[i][0] == e[i])
    rep.add("unit", w is None, w, c)
    w, c = first_failure(pairs, lambda i, j: S.brk[i][j] == {k: -x for k, x in S.brk[j][i].items()})
    rep.add("antisymmetry", w is None, w, c)

    def leibniz(i, j, k):
        lhs = S.br(S.mult[i][j], e[k])
        rhs = axpy(S.mul(e[i], S.brk[j][k]), 1, S.mul(S.brk[i][k], e[j]))
        return lhs == rhs

    w, c = first_failure(triples, leibniz)
    rep.add("leibniz", w is None, w, c)

    def jacobi(i, j, k):
        tot = S.br(e[i], S.brk[j][k])
        axpy(tot, 1, S.br(e[j], S.brk[k][i]))
        axpy(tot, 1, S.br(e[k], S.brk[i][j]))
        return not tot

    gens = [next(iter(g)) for g in S.generators if g]
    w, c = first_failure(list(itertools.product(gens, repeat=3)), jacobi)
    rep.add("jacobi_generators", w is None, w, c)
    if all_triples:
        w, c = first_failure(triples, jacobi)
        rep.add("jacobi", w is None, w, c)

    P = S.presentation
    bad, count = None, 0
    for r in P.relations:
        for t in range(P.nvars):
            count += 1
            x_t = tuple(1 if s == t else 0 for s in range(P.nvars))
            if normal_form(poly_bracket(r, x_t, P.brackets), P.relations):
                bad = (P.format_monomial(r), P.variables[t])
                break
        if bad:
            break
    rep.add("quotient_compatibility", bad is None, bad, count)
    return rep
