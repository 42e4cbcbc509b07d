import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from generators import random_formula

from imgql import formula as F
from imgql.checker import check_surrounded
from imgql.distance import chamfer_dt, edt
from imgql.expand import expand_formula
from imgql.model import Assertion, Model
from imgql.parser import parse_formula
from imgql.space import Adjacency, GridSpace, closure
from imgql.stats import cross_correlation

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@st.composite
def spaces(draw, max_side=7, three_d=True):
    ndim = draw(st.sampled_from([2, 3] if three_d else [2]))
    side = max_side if ndim == 2 else 4
    dims = tuple(draw(st.integers(1, side)) for _ in range(ndim))
    spacing = tuple(draw(st.floats(0.25, 4.0)) for _ in range(ndim))
    return GridSpace(dims, spacing, draw(st.sampled_from(list(Adjacency))))


@st.composite
def masks(draw, space):
    bits = draw(st.lists(st.booleans(), min_size=space.size, max_size=space.size))
    return space.pointset(np.array(bits).reshape(space.dims))


@st.composite
def space_and_sets(draw, n=2):
    s = draw(spaces())
    return (s, *(draw(masks(s)) for _ in range(n)))


@given(space_and_sets())
def test_closure_axioms(args):
    s, a, b = args
    assert closure(s.empty()).is_empty()
    assert a <= closure(a)
    assert closure(a | b) == closure(a) | closure(b)


@given(spaces(), st.data())
def test_closure_symmetry(s, data):
    x = tuple(data.draw(st.integers(0, n - 1)) for n in s.dims)
    y = tuple(data.draw(st.integers(0, n - 1)) for n in s.dims)
    assert (y in closure(s.from_points([x]))) == (x in closure(s.from_points([y])))


@given(spaces(), st.data())
def test_neighbor_weight_symmetry(s, data):
    x = tuple(data.draw(st.integers(0, n - 1)) for n in s.dims)
    for q, w in s.neighbors(x):
        assert dict(s.neighbors(q))[x] == w


@given(
    st.lists(st.sampled_from([0.0, 0.5, 1.0, 1.5, 2.0]), min_size=9, max_size=9),
    st.sampled_from([0.0, 0.5, 1.0, 1.7]),
    st.sampled_from([0.0, 0.5, 1.0, 1.7]),
)
def test_assertion_algebra(values, c1, c2):
    m = Model(GridSpace((3, 3)), {"a": values})
    ev = m.eval_assertion
    assert ev(Assertion("a", ">=", c1)) == ev(Assertion("a", ">", c1)) | ev(Assertion("a", "=", c1))
    lo, hi = sorted((c1, c2))
    assert ev(Assertion("a", ">", hi)) <= ev(Assertion("a", ">", lo))


@given(space_and_sets(3))
def test_surrounded_is_monotone_in_second_argument(args):
    s, a, b, extra = args
    assert check_surrounded(a, b) <= check_surrounded(a, b | extra)
    assert check_surrounded(a, b) <= a


@given(space_and_sets(2))
def test_distance_field_invariants(args):
    s, seed, more = args
    if seed.is_empty():
        return
    e = edt(s, seed).values
    c = chamfer_dt(s, seed).values
    assert np.array_equal(e == 0, seed.mask)
    assert np.array_equal(c == 0, seed.mask)
    assert np.all(c >= e - 1e-9)
    for field in (e, c):
        for p in s.full().points():
            for q, w in s.neighbors(p):
                assert abs(field[p] - field[q]) <= w + 1e-9
    bigger = seed | more
    assert np.all(edt(s, bigger).values <= e + 1e-12)
    assert np.all(chamfer_dt(s, bigger).values <= c + 1e-12)


counts = st.lists(st.integers(0, 50), min_size=2, max_size=12)


@given(counts, st.data())
def test_correlation_symmetry_and_affine_rule(h1, data):
    h2 = data.draw(st.lists(st.integers(0, 50), min_size=len(h1), max_size=len(h1)))
    a = data.draw(st.sampled_from([-3.5, -1.0, -0.25, 0.5, 2.0, 7.0]))
    b = data.draw(st.floats(-10, 10))
    h1, h2 = np.array(h1, float), np.array(h2, float)
    r = cross_correlation(h1, h2)
    assert -1.0 <= r <= 1.0
    assert r == cross_correlation(h2, h1)
    if len(set(h2)) > 1 and len(set(h1)) > 1:
        assert abs(cross_correlation(h1, a * h2 + b) - np.sign(a) * r) <= 1e-9


@given(st.integers(0, 2**32 - 1))
def test_print_then_parse_is_identity_on_core(seed):
    rng = np.random.default_rng(seed)
    f = random_formula(rng)
    if rng.random() < 0.5:
        f = F.Dist(F.CHAMFER if rng.random() < 0.5 else F.EUCLIDEAN, F.Interval(0.5, 3.0, False, True), f)
    assert expand_formula(parse_formula(F.to_text(f))) is f
