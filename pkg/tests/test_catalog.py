import pytest

from nhcurv.catalog import (
    CatalogStub,
    UnknownAlgebra,
    build_algebra,
    check_cartan,
    get_spec,
    list_algebras,
    lowering_ops,
    normalize_id,
    prolonged,
    raising_ops,
)
from nhcurv.exactalg import Q, parse_rational
from nhcurv.prolong import ProlongError
from nhcurv.superpoly import VectorField, field_degree_weight

REQUIRED = ["vle(4|3)", "vle(4|3;1)", "vle(4|3;K)", "vas(4|4)", "kas", "kas(;1xi)", "kas(;3xi)", "kas(;3eta)",
            "mb(4|5)", "mb(4|5;1)", "mb(4|5;K)", "ksle(9|6)", "ksle(9|6;2)", "ksle(9|6;K)", "ck(9|11)"]
BUILDABLE = [a for a in REQUIRED if a != "ck(9|11)"]


def test_list_contains_every_entry():
    rows = {r["id"]: r for r in list_algebras()}
    for a in REQUIRED:
        assert a in rows
    assert rows["vle(4|3)"]["depth"] == 1 and rows["vle(4|3)"]["dim_gminus"] == (4, 3)
    assert rows["mb(4|5;K)"]["depth"] == 3
    assert rows["ksle(9|6;K)"]["dim_gminus"] == (5, 10)
    assert rows["ck(9|11)"]["stub"]
    for fam in ("vect(2|0)", "k(3)", "engel", "on_structure(3)"):
        assert fam in rows


def test_names_are_normalized():
    assert normalize_id(" kas(;3η) ") == "kas(;3eta)"
    assert get_spec("kas(;3\\xi)").id == "kas(;3xi)"
    assert get_spec("vle(4|3; K)").id == "vle(4|3;K)"
    assert get_spec("vect(3)").id == "vect(3|0)"


def test_unknown_and_stub():
    with pytest.raises(UnknownAlgebra):
        get_spec("nonsense(1|1)")
    with pytest.raises(UnknownAlgebra):
        get_spec("k(4)")
    assert get_spec("ck(9|11)").stub
    with pytest.raises(CatalogStub):
        build_algebra("ck(9|11)")


def test_classical_shapes():
    g = build_algebra("engel")
    assert [g.dim(k) for k in (-1, -2, -3)] == [(2, 0), (1, 0), (1, 0)]
    assert g.generated_by_minus_one()
    g = build_algebra("k(5)")
    assert g.dim_minus() == (5, 0) and g.depth == 2 and g.dim(-2) == (1, 0)


def test_vle43_1_second_component():
    g = build_algebra("vle(4|3;1)")
    assert g.dim_minus() == (5, 4)
    (X,) = g.comp(-2).basis
    assert X.terms == VectorField.partial_field(g.cs, "u1").terms


def test_vle43_K_odd_weights():
    # coordinate weights are stored with the sign making the tabulated
    # weights come out as printed; the derivation d/dxi_1 then has weight (0, -1, 0, 0)
    g = build_algebra("vle(4|3;K)")
    deg, par, w = field_degree_weight(VectorField.partial_field(g.cs, "xi1"))
    assert (deg, par, w) == (-1, 1, (Q(0), Q(-1), Q(0), Q(0)))


@pytest.mark.parametrize("alg", BUILDABLE)
def test_catalog_entries_build_with_cartan_and_roots(alg):
    spec = get_spec(alg)
    g = build_algebra(alg)
    assert g.dim_minus() == tuple(spec.expected["gminus"])
    assert g.depth == spec.depth
    g.check_closure()
    check_cartan(g, spec.weight_modulo)
    up, down = raising_ops(g, spec), lowering_ops(g, spec)
    for X in up + down:
        assert X.parity == 0 and g.comp(0).contains(X)


def test_weight_key_modulo():
    spec = get_spec("ksle(9|6;K)")
    assert spec.weight_modulo
    w = [Q(1), Q(0), Q(-1), Q(2)][: len(spec.display_weight([0] * spec.rank))]
    shift = spec.display_weight([parse_rational(str(x)) for x in spec.weight_modulo[0]])
    shifted = [a + b for a, b in zip(w, shift)]
    assert spec.weight_key(w) == spec.weight_key(shifted)


def test_expected_dims_are_enforced():
    spec = get_spec("vle(4|3)")
    assert tuple(spec.expected["gminus"]) == (4, 3)
    # a mismatch between catalog data and the built algebra is a hard error
    from nhcurv import catalog

    bad = catalog.AlgebraSpec(**{**spec.__dict__, "expected": {"gminus": [5, 3]}})
    with pytest.raises(ProlongError):
        catalog._build(bad, 0)
