"""Presentation text for the standard example algebras."""

from __future__ import annotations

import itertools


def _text(name, variables, relations, brackets, field="Q") -> str:
    lines = [f"algebra {name}", f"field {field}", "vars " + " ".join(variables)]
    lines += [f"rel {r}" for r in relations]
    lines += [f"bracket {v} {w} = {p}" for v, w, p in brackets]
    lines.append("frobenius socle")
    return "\n".join(lines) + "\n"


def lambda_n(n: int, bracket: bool = True, field: str = "Q") -> str:
    """k[x1..xn]/(xi^2) with {xi, xj} = xi*xj for i < j."""
    if n < 1:
        raise ValueError("n must be at least 1")
    xs = [f"x{i}" for i in range(1, n + 1)]
    brs = [(a, b, f"{a}*{b}") for a, b in itertools.combinations(xs, 2)] if bracket else []
    name = f"lambda{n}" if bracket else f"lambda{n}_zero"
    return _text(name, xs, [f"{x}^2" for x in xs], brs, field)


def lambda_ab(a: int, b: int, bracket: bool = True, field: str = "Q") -> str:
    """k[x, y]/(x^a, y^b) with {x, y} = x*y."""
    if a < 2 or b < 2:
        raise ValueError("a and b must be at least 2")
    brs = [("x", "y", "x*y")] if bracket else []
    name = f"lambda{a}{b}" if bracket else f"lambda{a}{b}_zero"
    return _text(name, ["x", "y"], [f"x^{a}", f"y^{b}"], brs, field)


def xyz_unimodular(field: str = "Q") -> str:
    """k[x, y, z]/(x^2, y^2, z^2) with {x,y} = xy, {y,z} = yz, {x,z} = -xz."""
    brs = [("x", "y", "x*y"), ("y", "z", "y*z"), ("x", "z", "-x*z")]
    return _text("xyz", ["x", "y", "z"], ["x^2", "y^2", "z^2"], brs, field)


def log_canonical(coeffs: dict, n: int = 3, field: str = "Q") -> str:
    """k[x1..xn]/(xi^2) with {xi, xj} = c_ij xi*xj; ``coeffs`` maps (i, j), i < j, to an int."""
    xs = [f"x{i}" for i in range(1, n + 1)]
    brs = []
    for (i, j), c in sorted(coeffs.items()):
        if c:
            brs.append((xs[i], xs[j], f"{c}*{xs[i]}*{xs[j]}"))
    return _text("logcanonical", xs, [f"{x}^2" for x in xs], brs, field)


def fleet(include_large: bool = True) -> list:
    """(label, text) for every standard example, zero-bracket variants included."""
    out = []
    for n in (2, 3, 4) if include_large else (2, 3):
        out.append((f"lambda_{n}", lambda_n(n)))
    for a, b in itertools.product((2, 3), repeat=2):
        out.append((f"lambda_{a}{b}", lambda_ab(a, b)))
    out.append(("xyz", xyz_unimodular()))
    for n in (2, 3):
        out.append((f"lambda_{n}_zero", lambda_n(n, bracket=False)))
    out.append(("lambda_23_zero", lambda_ab(2, 3, bracket=False)))
    return out
