from __future__ import annotations

import random
from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ademcartan import gf2
from ademcartan.gf2 import (
    GF2Matrix,
    Perm,
    Quotient,
    binom_c,
    binom_may,
    block_perm,
    cross_perm,
    inconsistency_witness,
    perm_compose,
    quotient_basis,
    rref,
    solve_affine,
)

perms4 = st.permutations([1, 2, 3, 4]).map(Perm)


# -- binomials -------------------------------------------------------------

@pytest.mark.parametrize("i,j,want", [(0, 7, 1), (-1, 5, 0), (1, 1, 0), (2, 1, 1)])
def test_binom_may_examples(i, j, want):
    assert binom_may(i, j) == want


@pytest.mark.parametrize("n,k,want", [(3, 2, 1), (1, 2, 0), (0, 0, 1), (-3, 1, 0)])
def test_binom_c_examples(n, k, want):
    assert binom_c(n, k) == want


@given(st.integers(0, 300), st.integers(0, 300))
def test_binom_may_matches_factorials(i, j):
    assert binom_may(i, j) == comb(i + j, i) % 2
    assert binom_may(i, j) == binom_may(j, i)


@given(st.integers(-50, 300), st.integers(-50, 300))
def test_binom_c_matches_factorials(n, k):
    want = comb(n, k) % 2 if 0 <= k <= n else 0
    assert binom_c(n, k) == want


def test_lemma51_small_blocks_clean():
    for p in range(0, 8):
        assert gf2.lemma51_failures(p) == []


def test_doubling_identity_box():
    assert all(gf2.doubling_holds(l, p) for l in range(-64, 65) for p in range(-64, 65))


def test_pascal_identity_fails_only_at_the_corner():
    box = range(-64, 65)
    bad = {(x, y) for x in box for y in box if not gf2.pascal_holds(x, y)}
    assert bad == {(0, 0), (0, 1), (1, 0)}


# -- permutations ----------------------------------------------------------

def test_perm_compose_examples():
    P = Perm.parse
    assert perm_compose(P("(2143)"), P("(2143)")) == P("(1234)")
    assert perm_compose(P("(3412)"), P("(3412)")) == P("(1234)")
    assert perm_compose(P("(2134)"), P("(3214)")) == P("(3124)")


def test_perm_rejects_non_bijection():
    with pytest.raises(ValueError):
        Perm((1, 1, 2))


def test_perm_compose_arity_mismatch():
    with pytest.raises(ValueError):
        perm_compose(Perm((2, 1)), Perm((1, 2, 3)))


def test_perm_rendering_round_trip():
    s = Perm((3, 4, 1, 2))
    assert str(s) == "(3412)"
    assert Perm.parse(str(s)) == s


@given(perms4, perms4, perms4)
def test_perm_group_laws(a, b, c):
    e = Perm.identity(4)
    assert (a * b) * c == a * (b * c)
    assert a * e == a == e * a
    assert a * a.inverse() == e
    for i in range(1, 5):
        assert (a * b)(i) == a(b(i))


def test_block_perm_examples():
    assert block_perm(Perm((2, 1)), [2, 2]) == Perm((3, 4, 1, 2))
    assert block_perm(Perm((1, 2)), [2, 2]) == Perm((1, 2, 3, 4))
    assert block_perm(Perm((2, 1)), [1, 3]) == Perm((4, 1, 2, 3))


def test_block_perm_unit_sizes_is_identity_map():
    s = Perm((3, 1, 2))
    assert block_perm(s, [1, 1, 1]) == s


def test_block_perm_needs_sizes():
    with pytest.raises(ValueError):
        block_perm(Perm((1,)), [])


def test_cross_perm_of_twists():
    t = Perm((2, 1))
    e = Perm((1, 2))
    assert cross_perm(t, e) == Perm((2, 1, 3, 4))
    assert cross_perm(e, t) == Perm((1, 2, 4, 3))
    assert cross_perm(t, t) == Perm((2, 1, 4, 3))


# -- linear algebra --------------------------------------------------------

def test_solve_affine_examples():
    sol = solve_affine(GF2Matrix.identity(3), 0b101)
    assert sol.particular == 0b101 and sol.kernel == ()
    assert solve_affine(GF2Matrix.zeros(2, 2), 0b01) is None
    sol = solve_affine(GF2Matrix.from_lists([[1, 1], [0, 0]]), 0)
    assert sol.particular == 0 and list(sol.kernel) == [0b11]


def test_solve_affine_dimension_mismatch():
    with pytest.raises(ValueError):
        solve_affine(GF2Matrix.identity(2), 0b100)


def test_inconsistency_witness_sums_to_contradiction():
    A = GF2Matrix.from_lists([[1, 0], [0, 1], [1, 1]])
    b = 0b111  # x0 = x1 = 1 but also x0 + x1 = 1
    w = inconsistency_witness(A, b)
    assert w is not None
    total, rhs = 0, 0
    for r in w:
        total ^= A.rows[r]
        rhs ^= (b >> r) & 1
    assert total == 0 and rhs == 1


@st.composite
def matrices(draw, max_rows=24, max_cols=24):
    nrows = draw(st.integers(0, max_rows))
    ncols = draw(st.integers(1, max_cols))
    rows = draw(st.lists(st.integers(0, (1 << ncols) - 1), min_size=nrows, max_size=nrows))
    return GF2Matrix.from_rows(rows, ncols)


@given(matrices(), st.data())
def test_solve_affine_round_trip(A, data):
    x0 = data.draw(st.integers(0, (1 << A.ncols) - 1))
    b = A.mul_vec(x0)
    sol = solve_affine(A, b)
    assert sol is not None
    assert A.mul_vec(sol.particular) == b
    for k in sol.kernel:
        assert A.mul_vec(k) == 0
    assert len(sol.kernel) == A.ncols - A.rank()


@given(matrices())
def test_row_reduce_idempotent_and_rank_bound(A):
    R, piv = A.row_reduce()
    R2, piv2 = R.row_reduce()
    assert R2 == R and piv2 == piv
    assert A.rank() <= min(A.nrows, A.ncols)


@given(matrices(max_rows=40, max_cols=150))
def test_backends_agree(A):
    if gf2.BACKEND != "cython":
        pytest.skip("compiled kernel not built")
    rows = list(A.rows)
    assert rref(rows, A.ncols, backend="cython") == rref(rows, A.ncols, backend="python")


def test_backends_agree_on_wide_augmented_rows():
    if gf2.BACKEND != "cython":
        pytest.skip("compiled kernel not built")
    rng = random.Random(3)
    rows = [rng.getrandbits(300) for _ in range(120)]
    assert rref(rows, 200, backend="cython") == rref(rows, 200, backend="python")


def test_quotient_basis_examples():
    Q = quotient_basis([0b01, 0b10], [])
    assert Q.dim == 2
    Q = quotient_basis([0b01, 0b10], [0b01, 0b10])
    assert Q.dim == 0 and Q.project(0b11) == 0
    Q = quotient_basis([0b001, 0b010], [0b011])
    assert Q.dim == 1
    assert Q.project(0b001) == Q.project(0b010) != 0


def test_quotient_basis_rejects_non_subspace():
    with pytest.raises(ValueError):
        quotient_basis([0b01], [0b10])


@given(st.lists(st.integers(0, 255), max_size=8), st.lists(st.integers(0, 255), max_size=4))
def test_quotient_projection_laws(V, extra):
    W = [w for w in extra if gf2.Echelon(V).reduce(w) == 0]
    Q: Quotient = quotient_basis(V, W)
    for w in W:
        assert Q.project(w) == 0
    for k in range(Q.dim):
        assert Q.project(Q.lift(1 << k)) == 1 << k


def test_pure_python_fallback_selected_by_environment():
    import os
    import subprocess
    import sys

    env = dict(os.environ, ADEMCARTAN_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "import ademcartan; print(ademcartan.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
