from __future__ import annotations

import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ademcartan.cochains import (
    BUNDLED,
    Cls,
    ComplexFormatError,
    CupIndexError,
    SimplicialComplex,
    apply_squares,
    check_coboundary_identity,
    circle_algebra,
    cochain_algebra,
    coboundary_defect,
    cohomology,
    eval_tree,
    load_complex,
    load_model,
    point_algebra,
    product_class,
    resolve_model_path,
    sq,
    tensor_algebra,
    verify_relations,
)
from ademcartan.gf2 import Perm
from ademcartan.steenrod import SqPolynomial, adem_step, mono
from ademcartan.tree4 import (
    P3214,
    DiagSum,
    Tree2Elem,
    Tree2Sum,
    act,
    adem_diagonal,
    alpha,
    d_tree,
    diagonal_coeff,
    lemma332_expected,
    u,
)

DIMS = {"point": (1,), "s1": (1, 1), "torus": (1, 2, 1), "s2": (1, 0, 1), "rp2": (1, 1, 1)}
GRADED = ("point", "s1", "torus")


# -- loading ---------------------------------------------------------------

def test_load_bundled_complexes():
    s2 = load_complex(resolve_model_path("s2"))
    assert s2.vertex_count == 4 and len(s2.facets) == 4
    rp2 = load_complex(resolve_model_path("rp2.json"))
    assert rp2.vertex_count == 6 and len(rp2.facets) == 10


@pytest.mark.parametrize("facets,vertices", [([[2, 1]], 3), ([[0, 5]], 3), ([[0, 0, 1]], 3)])
def test_invalid_facets(facets, vertices):
    with pytest.raises(ComplexFormatError):
        SimplicialComplex(vertices, tuple(tuple(f) for f in facets))


def test_malformed_files(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ComplexFormatError):
        load_model(bad)
    bad.write_text(json.dumps({"type": "simplicial", "vertices": 3}))
    with pytest.raises(ComplexFormatError):
        load_model(bad)
    bad.write_text(json.dumps({"type": "klein"}))
    with pytest.raises(ComplexFormatError):
        load_model(bad)
    with pytest.raises(FileNotFoundError):
        load_model(tmp_path / "missing.json")


def test_tensor_file_resolves_relative_factors(tmp_path):
    (tmp_path / "c.json").write_text(json.dumps({
        "type": "cup_algebra",
        "basis": [{"name": "1", "degree": 0}, {"name": "a", "degree": 1}],
        "e": [{"i": 0, "args": ["1", "1"], "value": ["1"]},
              {"i": 0, "args": ["1", "a"], "value": ["a"]},
              {"i": 0, "args": ["a", "1"], "value": ["a"]},
              {"i": 1, "args": ["a", "a"], "value": ["a"]}]}))
    (tmp_path / "t.json").write_text(json.dumps({"type": "tensor", "factors": ["c.json", "c.json"]}))
    T = load_model(tmp_path / "t.json")
    assert cohomology(T).dims() == (1, 2, 1)


# -- structure maps --------------------------------------------------------

def test_s2_cup_product_on_one_triangle():
    A = cochain_algebra(load_complex(resolve_model_path("s2")))
    front, back = A.element("s0_1"), A.element("s1_2")
    assert A.e(0, front, back) == A.element("s0_1_2")
    assert A.e(0, back, front) == 0


def test_cup_i_vanishes_below_degree_zero(models):
    A = models["rp2"]
    v = A.element("s0")
    assert A.e(1, v, v) == 0
    assert A.e(2, A.element("s0_1"), v) == 0


def test_cup_index_beyond_i_max_is_an_error():
    A = cochain_algebra(load_complex(resolve_model_path("s2")), i_max=1)
    e = A.element("s0_1")
    with pytest.raises(CupIndexError):
        A.e(2, e, e)


def test_rp2_cup1_square_is_sq0(models, cohomologies):
    A, H = models["rp2"], cohomologies["rp2"]
    w = H.basis(1)[0]
    c = H.rep(w)
    y = A.e(1, c, c)
    assert A.dvec(y) == 0
    assert H.project(1, y) == w


def test_circle_table():
    S = circle_algebra()
    one, a = S.element("1"), S.element("a")
    assert S.e(0, one, one) == one
    assert S.e(1, a, a) == a
    assert S.e(0, a, a) == 0
    assert S.e(0, one, a) == a == S.e(0, a, one)
    assert S.is_graded


def test_torus_structure(torus):
    a, b, ab = (torus.element(n) for n in ("alpha", "beta", "alphabeta"))
    assert torus.e(1, a, b) == 0
    assert torus.e(2, ab, ab) == ab
    assert torus.e(0, a, b) == ab


def test_point_model():
    P = point_algebra()
    one = P.element("1")
    assert P.e(0, one, one) == one
    assert all(P.e(i, one, one) == 0 for i in range(1, 4))


# -- coboundary identity ---------------------------------------------------

@pytest.mark.parametrize("name", BUNDLED)
def test_coboundary_identity_random_pairs(models, name):
    results = check_coboundary_identity(models[name], 1000, random.Random(7))
    assert all(r.ok for r in results), results[:2]


@settings(max_examples=60)
@given(st.sampled_from(["s2", "rp2", "torus"]), st.randoms(use_true_random=False))
def test_coboundary_identity_property(name, rng):
    A = load_model(name)
    degs = sorted(A.by_degree)
    u_ = A.random_element(rng.choice(degs), rng)
    v_ = A.random_element(rng.choice(degs), rng)
    for i in range(A.i_max + 1):
        assert coboundary_defect(A, i, u_, v_) == 0


def test_tensor_of_simplicial_models_satisfies_contract():
    S1 = cochain_algebra(SimplicialComplex(3, ((0, 1), (1, 2), (0, 2))))
    T = tensor_algebra(S1, S1)
    assert cohomology(T).dims() == (1, 2, 1)
    results = check_coboundary_identity(T, 300, random.Random(1))
    assert all(r.ok for r in results)


# -- evaluation of trees ---------------------------------------------------

def test_eval_tree_examples(torus):
    a, b, ab = (torus.element(n) for n in ("alpha", "beta", "alphabeta"))
    X = Tree2Sum([Tree2Elem(0, 0, 0, Perm((1, 2, 3, 4)))])
    assert eval_tree(X, torus, (a, b, a, b)) == 0
    assert eval_tree(alpha(2, 2) + act(alpha(2, 0), P3214), torus, (a, b, a, b)) == ab


@given(st.permutations([1, 2, 3, 4]), st.integers(0, 3), st.integers(0, 3), st.integers(0, 3),
       st.lists(st.integers(1, 3), min_size=4, max_size=4))
def test_eval_tree_equivariance(perm, x, a_, b_, picks):
    T = load_model("torus")
    sigma = Perm(perm)
    s = Tree2Sum([Tree2Elem(x, a_, b_, Perm((1, 2, 3, 4)))])
    args = [1 << j for j in picks]
    inv = sigma.inverse()
    permuted = [args[inv(j) - 1] for j in range(1, 5)]
    assert eval_tree(act(s, sigma), T, args) == eval_tree(s, T, permuted)


@pytest.mark.parametrize("name", GRADED)
def test_boundaries_evaluate_to_zero_on_graded_models(models, name):
    # a tree in the image of d acts as zero when the differential vanishes
    A = models[name]
    rng = random.Random(5)
    for _ in range(40):
        terms = [Tree2Elem(rng.randrange(4), rng.randrange(4), rng.randrange(4),
                           Perm(rng.sample([1, 2, 3, 4], 4))) for _ in range(3)]
        boundary = d_tree(Tree2Sum(terms))
        for _ in range(10):
            args = [1 << rng.randrange(A.size) for _ in range(4)]
            assert eval_tree(boundary, A, args) == 0


def _eval_diag(A, c: int, s: DiagSum) -> int:
    out = 0
    for sym in s:
        out ^= A.e(sym.x, A.e(sym.a, c, c), A.e(sym.b, c, c))
    return out


@pytest.mark.parametrize("name", GRADED)
def test_diagonal_values_numerically(models, name):
    A = models[name]
    for j in range(A.size):
        c = 1 << j
        for m in range(1, 6):
            for n in range(0, 9):
                for x in range(0, 4):
                    got = eval_tree(u(m, n, x), A, (c, c, c, c))
                    assert got == _eval_diag(A, c, diagonal_coeff(u(m, n, x)))
                    if n > 0:
                        assert got == _eval_diag(A, c, lemma332_expected(m, n, x))


# -- cohomology and squares ------------------------------------------------

@pytest.mark.parametrize("name", BUNDLED)
def test_cohomology_dims(cohomologies, name):
    assert cohomologies[name].dims() == DIMS[name]


def test_rp2_sq1_is_square(models, cohomologies):
    A, H = models["rp2"], cohomologies["rp2"]
    w = H.basis(1)[0]
    assert sq(A, H, w, 1) == product_class(A, H, w, w) != Cls(2, 0)


@pytest.mark.parametrize("name", BUNDLED)
def test_instability(models, cohomologies, name):
    A, H = models[name], cohomologies[name]
    for k in range(0, A.top_degree + 1):
        for h in H.classes(k):
            for r in range(k + 1, k + 5):
                assert sq(A, H, h, r).coords == 0


def test_torus_sq1_top_class(torus, cohomologies):
    H = cohomologies["torus"]
    assert sq(torus, H, H.basis(2)[0], 1).coords == 0


@pytest.mark.parametrize("name", ["s2", "rp2"])
def test_sq_independent_of_representative(models, cohomologies, name):
    A, H = models[name], cohomologies[name]
    rng = random.Random(11)
    for k in range(0, A.top_degree + 1):
        for h in H.classes(k):
            c = H.rep(h)
            for _ in range(8):
                b = A.random_element(k - 1, rng) if k else 0
                alt = c ^ A.dvec(b)
                for r in range(0, k + 1):
                    y = A.e(k - r, alt, alt)
                    assert H.project(k + r, y) == sq(A, H, h, r)


def test_broken_model_is_detected():
    from ademcartan.cochains import _table_algebra

    A = _table_algebra([("1", 0), ("a", 1), ("b", 1), ("z", 2)], {"b": ["z"]},
                       [(0, "1", "1", ["1"]), (1, "a", "a", ["b"])])
    H = cohomology(A)
    with pytest.raises(ArithmeticError):
        sq(A, H, Cls(1, 1), 0)


# -- relations -------------------------------------------------------------

@pytest.mark.parametrize("name", BUNDLED)
def test_verify_relations_all_models(models, cohomologies, name):
    results = verify_relations(models[name], cohomologies[name])
    assert all(r.ok for r in results), [r.text() for r in results if not r.ok][:3]
    assert {r.check for r in results} >= {"cartan", "cartan_chain", "adem", "instability", "squaring", "level"}


def test_mutated_torus_is_caught(torus):
    broken = torus.with_entry(2, "alphabeta", "alphabeta", 0)
    results = verify_relations(broken)
    assert any(not r.ok for r in results)


def test_mutated_simplicial_model_is_caught(models):
    A = models["rp2"]
    broken = A.with_entry(0, "s0_1", "s1_2", 0)
    results = check_coboundary_identity(broken, 300, random.Random(2))
    results += verify_relations(broken)
    assert any(not r.ok for r in results)


@pytest.mark.parametrize("name", BUNDLED)
def test_adem_diagonal_agrees_on_cohomology(models, cohomologies, name):
    A, H = models[name], cohomologies[name]
    for k in range(0, A.top_degree + 1):
        for h in H.classes(k):
            c = H.rep(h)
            for n in range(0, 2 * A.top_degree + 3):
                for p in range(0, n + 1):
                    left, right = adem_diagonal(n, p)
                    diff = _eval_diag(A, c, left) ^ _eval_diag(A, c, right)
                    assert H.is_coboundary(diff)


@pytest.mark.parametrize("name", BUNDLED)
def test_adem_rewriting_sound_on_models(models, cohomologies, name):
    A, H = models[name], cohomologies[name]
    for t in range(-12, 13):
        for s in range(-12, 13):
            if t >= 2 * s:
                continue
            lhs, rhs = mono(t, s), adem_step(t, s)
            for k in range(0, A.top_degree + 1):
                for h in H.classes(k):
                    assert apply_squares(A, H, h, lhs).coords == apply_squares(A, H, h, rhs).coords


def test_apply_squares_zero_polynomial(models, cohomologies):
    H = cohomologies["torus"]
    assert apply_squares(models["torus"], H, H.basis(1)[0], SqPolynomial()).coords == 0
