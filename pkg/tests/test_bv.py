import itertools
import random

import pytest
from conftest import FLEET, SMALL, algebra, form, predicted_unimodular, random_log_canonical
from hypothesis import given, settings
from hypothesis import strategies as st

import frobpoisson.bv as bv
from frobpoisson import (
    NotUnimodularError,
    bivector,
    bv_delta,
    bv_identity_check,
    cohomology_bv,
    delta_via_star,
    frobenius_form,
    load_algebra,
    modular_vector,
    multiderivation_space,
    presets,
    schouten,
    unimodularity,
    wedge_md,
)
from frobpoisson.bv import _delta_wedge_part, as_multilinear, delta_matrix, delta_multilinear, md_at, shuffle_sign, wedge_parts
from frobpoisson.cohomology import apply_coboundary

TINY = ["lambda_2", "lambda_22", "lambda_23", "xyz", "lambda_2_zero"]


def basis(S, k):
    sp = multiderivation_space(S, k)
    return [sp.basis_element(i) for i in range(sp.dim)]


def neg(v):
    return {k: -x for k, x in v.items()}


def sign(e):
    return -1 if e % 2 else 1


def samples(S, k, count=4, seed=0):
    """A few basis elements plus a random combination, per degree."""
    els = basis(S, k)
    rng = random.Random(seed + k)
    out = els[:count]
    if els:
        tot = els[0].scale(0)
        for P in els:
            tot = tot + P.scale(rng.randint(-2, 2))
        out.append(tot)
    return out


def test_shuffle_sign():
    assert shuffle_sign((), 3) == 1
    assert shuffle_sign((0,), 3) == 1
    assert shuffle_sign((1,), 3) == -1
    assert shuffle_sign((2,), 3) == 1
    assert shuffle_sign((1, 2), 3) == 1


def test_md_at_is_skew_and_ignores_unit(xyz):
    P = basis(xyz, 2)[3]
    for a, b in itertools.permutations(range(1, 8), 2):
        assert md_at(P, (a, b)) == neg(md_at(P, (b, a)))
    assert md_at(P, (0, 3)) == {} and md_at(P, (3, 3)) == {}


def test_modular_vectors():
    assert modular_vector(algebra("lambda_22"), form("lambda_22")).rendered == "(-x)·∂x + y·∂y"
    assert modular_vector(algebra("lambda_23"), form("lambda_23")).rendered == "(-2*x)·∂x + y·∂y"
    assert modular_vector(algebra("xyz"), form("xyz")).derivation.is_zero()


@pytest.mark.parametrize("label", FLEET)
def test_delta_squared_and_degree_zero(label):
    S, F = algebra(label), form(label)
    for k in range(S.nvars + 1):
        D1, D2 = delta_matrix(S, F, k), delta_matrix(S, F, k + 1)
        assert (D1 @ D2).is_zero()
    assert bv_delta(S, F, basis(S, 0)[0]).is_zero()


@pytest.mark.parametrize("label", SMALL)
def test_delta_routes_agree(label):
    S, F = algebra(label), form(label)
    for k in range(1, S.nvars + 1):
        for P in samples(S, k):
            assert bv_delta(S, F, P) == delta_via_star(S, F, P)


@pytest.mark.parametrize("label", TINY)
def test_assembled_delta_matches_multilinear_definition(label):
    S, F = algebra(label), form(label)
    for k in range(1, S.nvars + 1):
        for P in basis(S, k):
            D = bv_delta(S, F, P)
            X = as_multilinear(P)
            for idx in itertools.permutations(range(1, S.dim), k - 1):
                assert md_at(D, idx) == delta_multilinear(F, X, idx)


@pytest.mark.parametrize("label", TINY)
def test_fast_split_wedge_delta_matches_generic(label):
    S, F = algebra(label), form(label)
    n = S.nvars
    for m, q in itertools.product(range(n + 1), repeat=2):
        if m + q > n + 1 or m + q == 0:
            continue
        for P in samples(S, m, 2):
            for Q in samples(S, q, 2):
                parts = wedge_parts(P, Q)
                for idx in itertools.combinations(range(1, S.dim), m + q - 1):
                    for part in (1, 2):
                        assert _delta_wedge_part(F, P, Q, idx, part) == delta_multilinear(F, parts[part - 1], idx)


@pytest.mark.parametrize("label", TINY)
def test_split_wedge_sums_to_wedge(label):
    S = algebra(label)
    for m, q in itertools.product(range(1, S.nvars + 1), repeat=2):
        if m + q > S.nvars:
            continue
        for P in samples(S, m, 2):
            for Q in samples(S, q, 2):
                p1, p2 = wedge_parts(P, Q)
                W = wedge_md(P, Q)
                for idx in itertools.permutations(range(1, S.dim), m + q):
                    tot = dict(p1(idx))
                    for k, x in p2(idx).items():
                        tot[k] = tot.get(k, 0) + x
                    assert md_at(W, idx) == {k: x for k, x in tot.items() if x}


def test_wedge_graded_commutative_and_associative(xyz):
    S = xyz
    for m, q in itertools.product(range(4), repeat=2):
        if m + q > 3:
            continue
        for P in samples(S, m, 3):
            for Q in samples(S, q, 3):
                PQ, QP = wedge_md(P, Q), wedge_md(Q, P)
                assert PQ.values == (QP.values if (m * q) % 2 == 0 else neg(QP.values))
    d = basis(S, 1)
    for a, b, c in itertools.product(d[:4], repeat=3):
        assert wedge_md(wedge_md(a, b), c) == wedge_md(a, wedge_md(b, c))


def test_schouten_on_functions_and_vector_fields(xyz):
    S = xyz
    for D in samples(S, 1, 6):
        for f in samples(S, 0, 8):
            # [D, f] = D(f)
            val = schouten(D, f)
            assert val.space.value(val.values, 0) == bv.md_apply(D, [f.space.value(f.values, 0)])


def combine(*terms):
    out = {}
    for c, v in terms:
        for k, x in v.items():
            out[k] = out.get(k, 0) + c * x
    return {k: x for k, x in out.items() if x}


@pytest.mark.parametrize("label", ["lambda_22", "xyz", "lambda_33"])
def test_graded_lie_on_shifted_degrees(label):
    S = algebra(label)
    n = S.nvars
    for m, q, r in itertools.product(range(n + 1), repeat=3):
        for P in samples(S, m, 2):
            for Q in samples(S, q, 2):
                # [P, Q] = -(-1)^((m-1)(q-1)) [Q, P]
                if 1 <= m + q <= n + 1:
                    assert schouten(P, Q).values == combine((-sign((m - 1) * (q - 1)), schouten(Q, P).values))
                if m + q + r - 2 > n or min(m + q, q + r, m + r) < 1 or m + q + r < 2:
                    continue
                for R in samples(S, r, 2):
                    # [P, [Q, R]] = [[P, Q], R] + (-1)^((m-1)(q-1)) [Q, [P, R]]
                    lhs = schouten(P, schouten(Q, R)).values
                    rhs = combine(
                        (1, schouten(schouten(P, Q), R).values),
                        (sign((m - 1) * (q - 1)), schouten(Q, schouten(P, R)).values),
                    )
                    assert lhs == rhs


@pytest.mark.parametrize("label", ["lambda_22", "xyz", "lambda_33", "lambda_3"])
def test_bracket_wedge_compatibility(label):
    S = algebra(label)
    n = S.nvars
    for m, q, r in itertools.product(range(n + 1), repeat=3):
        if m + q + r - 1 > n or m + q + r < 1:
            continue
        for P in samples(S, m, 2):
            for Q in samples(S, q, 2):
                for R in samples(S, r, 2):
                    # [P ^ Q, R] = (-1)^(m(r-1)) P ^ [Q, R] + (-1)^(q(m+r-1)) Q ^ [P, R]
                    lhs = schouten(wedge_md(P, Q), R).values
                    rhs = combine(
                        (sign(m * (r - 1)), wedge_md(P, schouten(Q, R)).values),
                        (sign(q * (m + r - 1)), wedge_md(Q, schouten(P, R)).values),
                    )
                    assert lhs == rhs
                    # [P, Q ^ R] = (-1)^((m-1)r) [P, Q] ^ R + Q ^ [P, R]
                    lhs = schouten(P, wedge_md(Q, R)).values
                    rhs = combine(
                        (sign((m - 1) * r), wedge_md(schouten(P, Q), R).values),
                        (1, wedge_md(Q, schouten(P, R)).values),
                    )
                    assert lhs == rhs


def test_untwisted_compatibility_sign_fails(xyz):
    # [a ^ b, c] = a ^ [b, c] + (-1)^((m-1)n) b ^ [a, c] cannot hold when a, b are
    # derivations and c = f a function: the left side a(f) b - b(f) a is antisymmetric
    # in (a, b) while the right side b(f) a + a(f) b is symmetric.
    S = xyz
    d = basis(S, 1)
    c = basis(S, 0)
    bad = 0
    for a, b in itertools.product(d[:6], repeat=2):
        for f in c:
            lhs = schouten(wedge_md(a, b), f).values
            rhs = combine((1, wedge_md(a, schouten(b, f)).values), (1, wedge_md(b, schouten(a, f)).values))
            bad += lhs != rhs
    assert bad > 0


@pytest.mark.parametrize("label", FLEET)
def test_pi_is_poisson_and_coboundary_is_bracket_with_pi(label):
    S = algebra(label)
    pi = bivector(S)
    assert schouten(pi, pi).is_zero()
    for k in range(S.nvars):
        for P in samples(S, k, 3):
            assert apply_coboundary(S, P).values == neg(schouten(P, pi).values)


@pytest.mark.parametrize("label", FLEET)
def test_unimodularity_verdicts(label):
    u = unimodularity(algebra(label), form(label))
    assert u.unimodular == ("zero" in label or label == "xyz")
    assert len(set(u.criteria.values())) == 1
    if not u.unimodular:
        assert set(u.witnesses) == {"delta_pi", "pairing", "sigma_module_map"}


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6), st.booleans())
def test_random_log_canonical_unimodularity(seed, force):
    c, text = random_log_canonical(random.Random(seed), 3, force)
    S = load_algebra(text)
    u = unimodularity(S, frobenius_form(S))
    assert u.unimodular == predicted_unimodular(c, 3)


def test_log_canonical_modular_vector_formula():
    # Delta(pi)(x_i) = -(sum_j c_ij) x_i
    c = {(0, 1): 2, (0, 2): -1, (1, 2): 3}
    S = load_algebra(presets.log_canonical(c))
    D = modular_vector(S, frobenius_form(S)).derivation
    rows = [c[(0, 1)] + c[(0, 2)], -c[(0, 1)] + c[(1, 2)], -c[(0, 2)] - c[(1, 2)]]
    for i in range(3):
        x = S.generators[i]
        assert D.value((i,)) == {k: -rows[i] * v for k, v in x.items() if rows[i]}


def test_induced_bv_on_xyz(xyz):
    rep = cohomology_bv(xyz, form("xyz"))
    assert rep.checks.ok, rep.checks.failures()
    assert rep.dims == [5, 6, 3, 1]


def test_induced_bv_requires_unimodular(lam22):
    with pytest.raises(NotUnimodularError):
        cohomology_bv(lam22, form("lambda_22"))


@pytest.mark.parametrize("label", SMALL)
def test_identity_sweep(label):
    rep = bv_identity_check(algebra(label), form(label))
    assert rep.ok, rep.checks.failures()
    assert rep.max_total_degree == algebra(label).nvars + 1


@pytest.mark.parametrize("field", ["F3", "F5", "F7"])
def test_identity_sweep_mod_p(field):
    S = load_algebra(presets.lambda_ab(2, 3, field=field))
    assert bv_identity_check(S, frobenius_form(S)).ok


def test_identity_sweep_with_non_socle_functional(lam22):
    F = frobenius_form(lam22, {(1, 1): 3, (1, 0): 1, (0, 0): 2})
    assert bv_identity_check(lam22, F).ok
    assert not unimodularity(lam22, F).unimodular


def test_corrupted_delta_breaks_eqxx1(monkeypatch, lam22):
    real = bv.bv_delta

    def doubled(S, F, P):
        return real(S, F, P).scale(2)

    monkeypatch.setattr(bv, "bv_delta", doubled)
    rep = bv_identity_check(lam22, form("lambda_22"))
    assert not rep.checks["eqxx1"].passed
    assert rep.checks["eqxx1"].witness is not None


def test_wrong_circle_sign_breaks_eqxx2(monkeypatch, lam22):
    real = bv._circ_at
    monkeypatch.setattr(bv, "_circ_at", lambda P, Q, idx: neg(real(P, Q, idx)))
    rep = bv_identity_check(lam22, form("lambda_22"))
    assert not rep.checks["eqxx2"].passed


def test_max_total_degree_limits_pairs(lam22):
    small = bv_identity_check(lam22, form("lambda_22"), 1)
    full = bv_identity_check(lam22, form("lambda_22"))
    assert small.checks["eqxx1"].count < full.checks["eqxx1"].count
    assert small.max_total_degree == 1 and small.ok
