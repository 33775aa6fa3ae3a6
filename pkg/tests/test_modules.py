import pytest
from conftest import FLEET, SMALL, algebra, form
from hypothesis import given, settings
from hypothesis import strategies as st

from frobpoisson import (
    FrobeniusError,
    Matrix,
    dual_module,
    dual_regular_module,
    frobenius_form,
    load_algebra,
    presets,
    regular_module,
    sigma_module,
    twisted_module,
    validate_module,
)
from frobpoisson.frobenius import check_form
from frobpoisson.modules import LEFT, ModuleError


def modules_of(S, F):
    yield regular_module(S)
    yield regular_module(S, LEFT)
    yield dual_regular_module(S)
    yield sigma_module(F)
    yield dual_module(sigma_module(F))


@pytest.mark.parametrize("label", FLEET)
def test_module_axioms_on_fleet(label):
    S, F = algebra(label), form(label)
    for M in modules_of(S, F):
        rep = validate_module(S, M)
        assert rep.ok, (M.name, rep.failures())


def test_dual_of_dual_is_original(lam22):
    M = regular_module(lam22)
    MM = dual_module(dual_module(M))
    assert MM.side == M.side and MM.name == M.name
    assert all(a == b for a, b in zip(MM.act, M.act)) and all(a == b for a, b in zip(MM.brk, M.brk))


def test_broken_module_is_flagged(lam22):
    S = lam22
    M = regular_module(S)
    bad_brk = tuple(b.scale(2) for b in M.brk)
    broken = type(M)(S, M.side, M.act, bad_brk, M.labels, "bad")
    rep = validate_module(S, broken)
    assert not rep.ok
    assert all(c.witness is not None for c in rep.failures())


def test_frobenius_pairing_lambda_n():
    S = load_algebra(presets.lambda_n(3))
    F = frobenius_form(S)
    assert F.pair(S.element("x1"), S.element("x2*x3")) == 1
    assert F.pair(S.element("x1"), S.element("x1*x2")) == 0
    assert check_form(F) == {"associative": True, "symmetric": True, "nondegenerate": True}


@pytest.mark.parametrize("label", FLEET)
def test_sigma_is_gram_and_invertible(label):
    F = form(label)
    n = F.algebra.dim
    assert F.sigma @ F.gram_inverse == Matrix.identity(n, F.algebra.field)
    assert check_form(F)["associative"]


def test_degenerate_functional_rejected(lam22):
    with pytest.raises(FrobeniusError):
        frobenius_form(lam22, {(0, 0): 1})  # coefficient of 1 only
    with pytest.raises(FrobeniusError):
        frobenius_form(lam22, {(1, 0): 1})


def test_non_socle_functional_accepted(lam22):
    F = frobenius_form(lam22, {(1, 1): 2, (1, 0): 5})
    assert F.pair(lam22.element("x"), lam22.element("y")) == 2


def test_non_frobenius_algebra():
    # k[x, y]/(x^2, xy, y^2) has a two-dimensional socle
    S = load_algebra("vars x y\nrel x^2\nrel x*y\nrel y^2\n")
    with pytest.raises(FrobeniusError):
        frobenius_form(S)


def test_twisted_module_requires_linear_iso(lam22):
    S = lam22
    with pytest.raises(ModuleError):
        twisted_module(S, Matrix.identity(S.dim))
    with pytest.raises(ModuleError):
        twisted_module(S, Matrix.zero(S.dim, S.dim))


def test_lambda22_twisted_brackets(lam22):
    S = lam22
    Ms = sigma_module(form("lambda_22"))
    x, y = S.element("x"), S.element("y")
    # {1, x}_sigma = x and {1, y}_sigma = -y; the twist shifts the regular bracket
    assert Ms.brk_on(x, S.unit()) == x
    assert Ms.brk_on(y, S.unit()) == {k: -v for k, v in y.items()}


@pytest.mark.parametrize("label", SMALL)
def test_sigma_intertwines_brackets(label):
    S, F = algebra(label), form(label)
    Ms, star = sigma_module(F), dual_regular_module(S)
    for s in range(S.dim):
        assert F.sigma @ Ms.brk[s] == star.brk[s] @ F.sigma
        assert F.sigma @ Ms.act[s] == star.act[s] @ F.sigma


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(-2, 2), min_size=8, max_size=8), st.lists(st.integers(-2, 2), min_size=8, max_size=8))
def test_right_module_bracket_is_derivation_in_s(a, b):
    S = algebra("xyz")
    Ms = sigma_module(form("xyz"))
    a = {i: v for i, v in enumerate(a) if v}
    b = {i: v for i, v in enumerate(b) if v}
    m = {7: 1, 1: 2}
    lhs = Ms.brk_on(S.mul(a, b), m)
    r1 = Ms.act_on(b, Ms.brk_on(a, m))
    r2 = Ms.act_on(a, Ms.brk_on(b, m))
    tot = dict(r1)
    for k, v in r2.items():
        tot[k] = tot.get(k, 0) + v
    assert lhs == {k: v for k, v in tot.items() if v}
