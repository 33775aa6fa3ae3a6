import itertools

import pytest
from conftest import ALGEBRAS, FLEET, algebra
from hypothesis import given, settings
from hypothesis import strategies as st

from frobpoisson import GF, PresentationError, bracket, load_algebra, multiply, parse_presentation, presets, validate_algebra


def test_lambda22_basis_and_products(lam22):
    S = lam22
    assert S.dim == 4
    assert [S.basis_name(j) for j in range(4)] == ["1", "x", "y", "x*y"]
    x, y = S.element("x"), S.element("y")
    assert S.mul(x, y) == S.element("x*y")
    assert S.mul(x, x) == {}
    assert S.br(x, y) == S.element("x*y")
    assert S.br(y, x) == S.element("-x*y")
    assert multiply(S, [0, 1, 0, 0], [0, 0, 1, 0]) == [0, 0, 0, 1]
    assert bracket(S, [0, 0, 1, 0], [0, 1, 0, 0]) == [0, 0, 0, -1]


def test_bracket_extends_by_leibniz():
    S = load_algebra(presets.lambda_ab(3, 3))
    x, y = S.element("x"), S.element("y")
    # {x^2, y} = 2x{x, y} = 2x^2y
    assert S.br(S.element("x^2"), y) == S.element("2*x^2*y")
    assert S.br(S.element("x*y"), x) == S.element("-x^2*y")


@pytest.mark.parametrize("label", FLEET)
def test_fleet_validates(label):
    rep = validate_algebra(algebra(label))
    assert rep.ok, rep.failures()
    assert {c.name for c in rep.checks} >= {"commutativity", "associativity", "leibniz", "jacobi", "antisymmetry"}


@pytest.mark.parametrize("fname", sorted(p.name for p in ALGEBRAS.glob("*.fp")))
def test_shipped_files_validate(fname):
    S = load_algebra((ALGEBRAS / fname).read_text())
    assert validate_algebra(S).ok


def test_jacobi_failure_has_witness():
    text = "vars x y z\nrel x^2\nrel y^2\nrel z^2\nbracket x y = z\nbracket y z = x\nbracket x z = y\n"
    rep = validate_algebra(load_algebra(text))
    assert not rep.ok
    bad = {c.name for c in rep.failures()}
    assert bad & {"jacobi", "jacobi_generators", "quotient_compatibility"}
    assert all(c.witness is not None for c in rep.failures())


def test_bracket_not_preserving_ideal_is_flagged():
    # {x, y} = 1 does not preserve (x^2): {x^2, y} = 2x
    rep = validate_algebra(load_algebra("vars x y\nrel x^2\nrel y^2\nbracket x y = 1\n"))
    assert not rep["quotient_compatibility"].passed


@pytest.mark.parametrize(
    "text, line, fragment",
    [
        ("vars x\nrel x^2\nbogus 1\n", 3, "unknown directive"),
        ("rel x^2\n", 1, "'vars' must come first"),
        ("vars x y\nrel x^2\nrel y^2\nbracket x x = 1\n", 4, "itself"),
        ("vars x y\nrel x^2\nrel y^2\nbracket x y = x\nbracket y x = y\n", 5, "twice"),
        ("vars x y\nrel x^2\nrel y^2\nbracket x w = x\n", 4, "variables"),
        ("vars x\nvars y\n", 2, "twice"),
        ("field F4\nvars x\nrel x^2\n", 1, "not prime"),
        ("vars x\nrel x^2\nfrobenius x:1\nfrobenius socle\n", 4, "twice"),
    ],
)
def test_parse_errors_carry_line_numbers(text, line, fragment):
    with pytest.raises(PresentationError) as err:
        parse_presentation(text)
    assert err.value.line == line
    assert fragment in str(err.value)
    assert str(err.value).startswith(f"line {line}:")


@pytest.mark.parametrize(
    "text",
    [
        "",
        "vars x y\nrel x^2\n",  # y unbounded
        "field F2\nvars x\nrel x^2\n",
        "vars x\nrel x^2\nfrobenius x^2:1\n",  # monomial vanishes
    ],
)
def test_invalid_presentations(text):
    with pytest.raises(PresentationError):
        parse_presentation(text)


def test_field_override_and_characteristic():
    S = load_algebra(presets.lambda_n(2), GF(5))
    assert str(S.field) == "F5"
    assert S.br(S.element("x1"), S.element("x2")) == S.element("x1*x2")
    assert str(parse_presentation(presets.lambda_n(2, field="F3"), GF(5)).field) == "F5"
    S7 = load_algebra(presets.lambda_ab(2, 2, field="F7"))
    assert validate_algebra(S7).ok


@pytest.mark.parametrize("label", FLEET)
def test_to_text_round_trip(label):
    P = algebra(label).presentation
    Q = parse_presentation(P.to_text())
    assert Q.to_text() == P.to_text()
    assert Q.brackets == P.brackets and Q.relations == P.relations


def test_comments_and_whitespace_ignored():
    text = "# header\n\n  algebra  t  \nvars x y   # two\nrel x^2\nrel y^3\nbracket y x = -x*y\n"
    S = load_algebra(text)
    assert S.name == "t" and S.dim == 6
    assert S.br(S.element("x"), S.element("y")) == S.element("x*y")


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 4), st.integers(2, 4), st.integers(-3, 3))
def test_scaled_bracket_lambda_ab_is_poisson(a, b, c):
    text = presets.lambda_ab(a, b).replace("bracket x y = x*y", f"bracket x y = {c}*x*y")
    S = load_algebra(text)
    assert S.dim == a * b
    assert validate_algebra(S, all_triples=False).ok


def test_mult_table_commutative_associative(xyz):
    S = xyz
    e = [S.basis_element(i) for i in range(S.dim)]
    for i, j, k in itertools.product(range(S.dim), repeat=3):
        assert S.mul(S.mul(e[i], e[j]), e[k]) == S.mul(e[i], S.mul(e[j], e[k]))
