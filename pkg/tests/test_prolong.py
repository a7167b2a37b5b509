import pytest

from helpers import jacobi_failures
from nhcurv.catalog import prolonged
from nhcurv.prolong import (
    GradedAlgebra,
    ProlongError,
    TruncationError,
    nonpositive_algebra,
    partial_prolong,
    prolong,
    regrade,
)
from nhcurv.superpoly import CoordinateSystem, parse_field


def dims(g):
    return {k: g.dim(k) for k in g.degrees()}


def test_vect_dimensions():
    # vect(n|0): g_k = polynomials of degree k+1 times n directions
    assert dims(prolonged("vect(2|0)", 3)) == {-1: (2, 0), 0: (4, 0), 1: (6, 0), 2: (8, 0), 3: (10, 0)}
    assert dims(prolonged("vect(1|1)", 2)) == {-1: (1, 1), 0: (2, 2), 1: (2, 2), 2: (2, 2)}


def test_contact_dimensions():
    # k(3) is realized by generating functions in t, p, q with deg t = 2
    # and g_k = functions of weighted degree k + 2
    assert dims(prolonged("k(3)", 2)) == {-2: (1, 0), -1: (2, 0), 0: (4, 0), 1: (6, 0), 2: (9, 0)}


def test_riemannian_prolong_stops():
    g = prolonged("on_structure(4)", 2)
    assert g.dim(0) == (6, 0)
    assert g.dim(1) == (0, 0) and g.dim(2) == (0, 0)


def test_weighted_regrade_matches_direct_prolong():
    r = regrade(lambda D: prolonged("vect(2|0)", D), "w", (1, 2), 3)
    cs = CoordinateSystem.build([("x1", 0, 1), ("x2", 0, 2)])
    f = lambda s: parse_field(cs, s)
    base = nonpositive_algebra("w", cs, {-1: [f("D[x1]"), f("x1*D[x2]")], -2: [f("D[x2]")]})
    assert dims(r) == dims(prolong(base, 3))


def test_partial_prolong_checks_prescribed_component():
    cs = CoordinateSystem.build([("x", 0, 1), ("y", 0, 1)])
    f = lambda s: parse_field(cs, s)
    gl2 = [f("x*D[x]"), f("x*D[y]"), f("y*D[x]"), f("y*D[y]")]
    base = nonpositive_algebra("p", cs, {-1: [f("D[x]"), f("D[y]")]}, g0=gl2[:1] + gl2[3:])
    # with g_0 the diagonal torus, x^2 d_x is fine but x y d_y is not
    partial_prolong(base, {1: [f("x^2*D[x]")]}, 1)
    with pytest.raises(ProlongError):
        partial_prolong(base, {1: [f("x*y*D[y]")]}, 1)
    # over gl(2) the projective fields x E and y E are admissible
    base = nonpositive_algebra("p", cs, {-1: [f("D[x]"), f("D[y]")]}, g0=gl2)
    ok = partial_prolong(base, {1: [f("x^2*D[x] + x*y*D[y]"), f("x*y*D[x] + y^2*D[y]")]}, 1)
    assert ok.dim(1) == (2, 0)


def test_generator_degree_checked():
    cs = CoordinateSystem.build([("x", 0, 1)])
    with pytest.raises(ProlongError):
        nonpositive_algebra("bad", cs, {-1: [parse_field(cs, "x*D[x]")]})


def test_truncation_is_reported():
    g = prolonged("vect(1|0)", 1)
    with pytest.raises(TruncationError):
        g.comp(5)


def test_json_roundtrip():
    g = prolonged("k(3)", 2)
    h = GradedAlgebra.from_json(g.to_json())
    assert dims(h) == dims(g)
    assert all(h.comp(k).basis[i].terms == g.comp(k).basis[i].terms
               for k in g.degrees() for i in range(len(g.comp(k).basis)))


def test_disk_cache_is_transparent(tmp_path):
    a = prolonged("vect(1|1)", 2, cache_dir=str(tmp_path))
    b = prolonged("vect(1|1)", 2, cache_dir=str(tmp_path))
    assert list(tmp_path.iterdir())
    assert dims(a) == dims(b)


@pytest.mark.parametrize("alg,top", [("vect(1|1)", 2), ("k(3)", 2), ("engel", 1), ("vle(4|3)", 1),
                                     ("kas", 1), ("vect(2|0)", 2)])
def test_structure_constants_satisfy_super_jacobi(alg, top):
    g = prolonged(alg, top)
    g.check_closure()
    assert jacobi_failures(g, samples=1500) == []
