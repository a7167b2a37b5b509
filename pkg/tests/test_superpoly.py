import pytest
from hypothesis import given, strategies as st

from nhcurv.exactalg import Q
from nhcurv.superpoly import (
    CoordinateError,
    CoordinateSystem,
    ParseError,
    SuperPolynomial,
    VectorField,
    monomials_of_degree,
    parse_field,
    parse_poly,
)

CS = CoordinateSystem.build([("u", 0, 1), ("v", 0, 2), ("x", 1, 1), ("y", 1, 1)])
COEF = st.integers(-3, 3).filter(bool)


@st.composite
def monos(draw):
    return (draw(st.integers(0, 2)), draw(st.integers(0, 1)), draw(st.integers(0, 1)), draw(st.integers(0, 1)))


def mono_parity(m):
    return (m[2] + m[3]) % 2


@st.composite
def polys(draw, parity=None):
    p = draw(st.integers(0, 1)) if parity is None else parity
    ms = draw(st.lists(monos().filter(lambda m: mono_parity(m) == p), max_size=3))
    return SuperPolynomial(CS, {m: draw(COEF) for m in ms})


@st.composite
def fields(draw, parity=None):
    p = draw(st.integers(0, 1)) if parity is None else parity
    terms = {}
    for _ in range(draw(st.integers(1, 3))):
        i = draw(st.integers(0, 3))
        want = (p + CS.parities[i]) % 2
        m = draw(monos().filter(lambda m: mono_parity(m) == want))
        terms[(m, i)] = draw(COEF)
    return VectorField(CS, terms)


def sign(a, b):
    return -1 if a.parity and b.parity else 1


def test_odd_coordinates_square_to_zero():
    x = SuperPolynomial.coord(CS, "x")
    y = SuperPolynomial.coord(CS, "y")
    assert (x * x).is_zero()
    assert (x * y + y * x).is_zero()


def test_partial_derivatives_anticommute_with_odd():
    p = parse_poly(CS, "x*y")
    Dy = VectorField.partial_field(CS, "y")
    assert Dy.apply(p).terms == parse_poly(CS, "-x").terms


def test_grading_and_parity():
    X = parse_field(CS, "u*x*D[y] - 1/2*v*D[u]")
    assert X.parity == 0
    assert X.degree == 1
    with pytest.raises(ValueError):
        parse_field(CS, "u*D[u] + v*D[u]").degree
    assert parse_poly(CS, "v").degree == 2
    assert len(monomials_of_degree(CS, 1)) == 3


def test_parse_errors():
    with pytest.raises(ParseError):
        parse_field(CS, "u*x")
    with pytest.raises(ParseError):
        parse_poly(CS, "D[u]")
    with pytest.raises(CoordinateError):
        CoordinateSystem.build([("u", 0, 1), ("u", 1, 1)])


def test_inhomogeneous_parity_rejected():
    with pytest.raises(ValueError):
        parse_field(CS, "D[u] + D[x]").parity


@given(fields())
def test_render_parse_roundtrip(X):
    assert parse_field(CS, str(X)).terms == X.terms


@given(polys(), polys(), polys())
def test_polynomial_ring_axioms(a, b, c):
    assert ((a * b) * c).terms == (a * (b * c)).terms
    assert (a * (b + c)).terms == (a * b + a * c).terms
    assert (a * b).terms == (b * a).scale(Q(sign(a, b))).terms


@given(fields(), polys(), polys())
def test_leibniz_rule(X, f, g):
    lhs = X.apply(f * g)
    rhs = X.apply(f) * g + (f * X.apply(g)).scale(Q(sign(X, f)))
    assert lhs.terms == rhs.terms


@given(fields(), fields())
def test_bracket_super_antisymmetry(X, Y):
    assert X.bracket(Y).terms == Y.bracket(X).scale(Q(-sign(X, Y))).terms


@given(fields(), fields(), polys())
def test_bracket_is_supercommutator_of_operators(X, Y, f):
    lhs = X.bracket(Y).apply(f)
    rhs = X.apply(Y.apply(f)) - Y.apply(X.apply(f)).scale(Q(sign(X, Y)))
    assert lhs.terms == rhs.terms


@given(fields(), fields(), fields())
def test_super_jacobi(X, Y, Z):
    # [X,[Y,Z]] = [[X,Y],Z] + (-1)^{p(X)p(Y)} [Y,[X,Z]]
    lhs = X.bracket(Y.bracket(Z))
    rhs = X.bracket(Y).bracket(Z) + Y.bracket(X.bracket(Z)).scale(Q(sign(X, Y)))
    assert lhs.terms == rhs.terms
