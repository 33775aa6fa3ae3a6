"""Command line entry point ``fp``.

Exit codes: 0 success, 1 a checked property fails, 2 input or parse error
(including an invalid Poisson structure), 3 the pairing is degenerate.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field

from .algebra import PoissonAlgebra, PresentationError, load_algebra, validate_algebra
from .bv import NotUnimodularError, bv_identity_check, cohomology_bv, modular_vector, unimodularity
from .cohomology import coboundary, left_regular, multiderivation_space, phi_duality_check, poisson_cohomology
from .fields import FieldError, parse_field
from .frobenius import FrobeniusError, frobenius_form, sigma_module
from .homology import boundary, poisson_homology
from .kaehler import kaehler_module
from .linalg import rank
from .modules import dual_regular_module, regular_module
from .reports import Check

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_NOT_FROBENIUS = 0, 1, 2, 3

COMMANDS = (
    "validate",
    "basis",
    "homology",
    "cohomology",
    "duality",
    "unimodular",
    "modular-vector",
    "bv-check",
    "bv-cohomology",
)
COEFF_COMMANDS = ("homology", "duality")


class InputError(Exception):
    pass


@dataclass
class Report:
    algebra: PoissonAlgebra
    command: str
    degrees: list = field(default_factory=list)  # dicts with k, dim, representatives (+ extras)
    checks: list = field(default_factory=list)  # Check objects
    lines: list = field(default_factory=list)  # extra human-readable lines
    exit_code: int = EXIT_OK

    def as_dict(self) -> dict:
        S = self.algebra
        return {
            "algebra": {"name": S.name, "dim": S.dim, "field": str(S.field)},
            "command": self.command,
            "degrees": self.degrees,
            "checks": [c.as_dict() for c in self.checks],
        }


def emit_report(report: Report, mode: str = "table") -> str:
    if mode == "json":
        return json.dumps(report.as_dict(), sort_keys=True, indent=2, ensure_ascii=False, default=str) + "\n"
    S = report.algebra
    out = [f"{report.command}: {S.name} (dim {S.dim} over {S.field})"]
    out += report.lines
    for row in report.degrees:
        extra = "".join(f"  {k} {row[k]}" for k in sorted(row) if k not in ("k", "dim", "representatives"))
        out.append(f"  k={row['k']}  dim {row['dim']}{extra}")
        for r in row["representatives"]:
            out.append(f"      {r}")
    for c in report.checks:
        status = "pass" if c.passed else "FAIL"
        cnt = f" ({c.count})" if c.count is not None else ""
        wit = f"  witness: {c.witness}" if c.witness is not None and not c.passed else ""
        out.append(f"  [{status}] {c.name}{cnt}{wit}")
    return "\n".join(out) + "\n"


def _rows(dims, reps, top: int) -> list:
    rows = []
    for k in range(top + 1):
        if k < len(dims):
            rows.append({"k": k, "dim": dims[k], "representatives": list(reps[k])})
        else:
            rows.append({"k": k, "dim": 0, "representatives": []})
    return rows


def _module(S, coeff: str):
    if coeff == "regular":
        return regular_module(S)
    if coeff == "dual":
        return dual_regular_module(S)
    return sigma_module(frobenius_form(S))


def _squares_zero(rep: Report, name: str, mats) -> None:
    bad = [k for k, (a, b) in enumerate(mats) if not (a @ b).is_zero()]
    rep.checks.append(_check(name, not bad, bad or None))


def _check(name, passed, witness=None, count=None) -> Check:
    return Check(name, passed, witness, count)


def cmd_validate(S, args) -> Report:
    rep = Report(S, "validate")
    rep.checks += validate_algebra(S).checks
    try:
        frobenius_form(S)
        rep.checks.append(_check("frobenius_nondegenerate", True))
    except FrobeniusError as e:
        rep.checks.append(_check("frobenius_nondegenerate", False, str(e)))
    rep.exit_code = EXIT_OK if all(c.passed for c in rep.checks) else EXIT_FAIL
    return rep


def cmd_basis(S, args) -> Report:
    rep = Report(S, "basis")
    for k in range(S.nvars + 2):
        om = kaehler_module(S, k)
        rep.degrees.append({"k": k, "dim": om.dim, "representatives": [om.label(i) for i in range(om.dim)]})
    rep.lines.append("  rows: Omega^k, with k = 0 the algebra itself")
    return rep


def cmd_homology(S, args) -> Report:
    coeff = args.coeff or "regular"
    M = _module(S, coeff)
    h = poisson_homology(S, M)
    rep = Report(S, "homology")
    rep.lines.append(f"  HP_k(S, {M.name})")
    rep.degrees = _rows(h.dims, h.rendered, S.nvars + 1)
    _squares_zero(rep, "boundary_squared_zero", [(boundary(S, M, k), boundary(S, M, k + 1)) for k in range(1, S.nvars + 1)])
    return rep


def cmd_cohomology(S, args) -> Report:
    c = poisson_cohomology(S)
    rep = Report(S, "cohomology")
    rep.lines.append("  HP^k(S, S)")
    rep.degrees = _rows(c.dims, c.rendered, S.nvars + 1)
    for row in rep.degrees:
        k = row["k"]
        row["cochains"] = multiderivation_space(S, k).dim if k <= S.nvars else 0
    L = left_regular(S)
    _squares_zero(rep, "coboundary_squared_zero", [(coboundary(S, L, k + 1), coboundary(S, L, k)) for k in range(S.nvars)])
    return rep


def cmd_duality(S, args) -> Report:
    coeff = args.coeff or "twist"
    M = _module(S, coeff)
    d = phi_duality_check(S, M)
    h = poisson_homology(S, M)
    rep = Report(S, "duality")
    rep.lines.append(f"  rows: dim HP_k(S, {M.name}) with the paired cohomology dimension")
    rep.degrees = _rows(h.dims, h.rendered, S.nvars + 1)
    if coeff == "twist":
        co = poisson_cohomology(S).dims
        label = "HP^k(S,S)"
    else:
        co = d.cohomology_dims
        label = f"HP^k(S,{M.name}*)"
    for row in rep.degrees:
        k = row["k"]
        row["paired_dim"] = co[k] if k < len(co) else 0
    rep.lines.append(f"  paired_dim is dim {label}")
    rep.checks += d.checks.checks
    if coeff == "twist":
        ok = co == d.homology_dims
        rep.checks.append(_check("hp_upper_equals_hp_lower_twisted", ok, None if ok else {"HP^": co, "HP_": d.homology_dims}))
    rep.exit_code = EXIT_OK if all(c.passed for c in rep.checks) else EXIT_FAIL
    return rep


def cmd_unimodular(S, args) -> Report:
    F = frobenius_form(S)
    u = unimodularity(S, F)
    rep = Report(S, "unimodular")
    rep.lines.append(f"  unimodular: {'yes' if u.unimodular else 'no'}")
    if not u.unimodular:
        rep.lines.append(f"  modular derivation Delta(pi) = {u.modular.rendered}")
    for name, verdict in u.criteria.items():
        rep.checks.append(_check(name, verdict, u.witnesses.get(name)))
    rep.exit_code = EXIT_OK if u.unimodular else EXIT_FAIL
    return rep


def cmd_modular_vector(S, args) -> Report:
    F = frobenius_form(S)
    mod = modular_vector(S, F)
    rep = Report(S, "modular-vector")
    rep.lines.append(f"  Delta(pi) = {mod.rendered}")
    rep.degrees.append({"k": 1, "dim": 0 if mod.derivation.is_zero() else 1, "representatives": [mod.rendered]})
    return rep


def cmd_bv_check(S, args) -> Report:
    F = frobenius_form(S)
    r = bv_identity_check(S, F, args.max_total_degree)
    rep = Report(S, "bv-check")
    rep.lines.append(f"  pairs of basis multiderivations with total degree <= {r.max_total_degree}")
    rep.lines.append(f"  Delta(pi) = {r.modular}")
    rep.checks += r.checks.checks
    rep.exit_code = EXIT_OK if r.ok else EXIT_FAIL
    return rep


def cmd_bv_cohomology(S, args) -> Report:
    F = frobenius_form(S)
    rep = Report(S, "bv-cohomology")
    try:
        r = cohomology_bv(S, F)
    except NotUnimodularError as e:
        rep.lines.append(f"  {e}")
        rep.checks.append(_check("unimodular", False, str(e)))
        rep.exit_code = EXIT_FAIL
        return rep
    c = poisson_cohomology(S)
    rep.degrees = _rows(c.dims, c.rendered, S.nvars + 1)
    for k, row in enumerate(rep.degrees):
        row["delta_rank"] = rank(r.induced[k]) if k < len(r.induced) else 0
    rep.checks.append(_check("unimodular", True))
    rep.checks += r.checks.checks
    rep.exit_code = EXIT_OK if all(ch.passed for ch in rep.checks) else EXIT_FAIL
    return rep


HANDLERS = {
    "validate": cmd_validate,
    "basis": cmd_basis,
    "homology": cmd_homology,
    "cohomology": cmd_cohomology,
    "duality": cmd_duality,
    "unimodular": cmd_unimodular,
    "modular-vector": cmd_modular_vector,
    "bv-check": cmd_bv_check,
    "bv-cohomology": cmd_bv_cohomology,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fp", description="Poisson (co)homology and BV checks for Frobenius Poisson algebras.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("path", help="presentation file (.fp)")
    p.add_argument("--coeff", choices=("regular", "dual", "twist"), help="coefficients for homology/duality")
    p.add_argument("--max-total-degree", type=int, default=None, help="bv-check: largest m + n (default nvars + 1)")
    p.add_argument("--json", action="store_true", help="emit a JSON document")
    p.add_argument("--field", default=None, help="override the field: Q or F<p>")
    return p


def _load(args) -> PoissonAlgebra:
    try:
        with open(args.path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise InputError(f"cannot read {args.path}: {e.strerror}") from None
    field_ = parse_field(args.field) if args.field else None
    S = load_algebra(text, field_)
    if args.command != "validate":
        bad = validate_algebra(S).failures()
        if bad:
            names = ", ".join(f"{c.name} at {c.witness}" for c in bad)
            raise InputError(f"not a Poisson algebra: {names}")
    return S


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK
    if args.coeff and args.command not in COEFF_COMMANDS:
        print(f"fp: --coeff is only valid for {' and '.join(COEFF_COMMANDS)}", file=sys.stderr)
        return EXIT_INPUT
    if args.max_total_degree is not None and args.max_total_degree < 0:
        print("fp: --max-total-degree must be nonnegative", file=sys.stderr)
        return EXIT_INPUT
    try:
        S = _load(args)
        rep = HANDLERS[args.command](S, args)
    except (InputError, PresentationError, FieldError) as e:
        print(f"fp: {e}", file=sys.stderr)
        return EXIT_INPUT
    except FrobeniusError as e:
        print(f"fp: {e}", file=sys.stderr)
        return EXIT_NOT_FROBENIUS
    sys.stdout.write(emit_report(rep, "json" if args.json else "table"))
    return rep.exit_code


def main(argv=None) -> int:
    return run(argv)


if __name__ == "__main__":
    sys.exit(main())
