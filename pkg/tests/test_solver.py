from __future__ import annotations

import dataclasses
import random
import time

import pytest

from ademcartan.cochains import cohomology, load_model
from ademcartan.gf2 import GF2Matrix, InconsistentSystem
from ademcartan.solver import (
    TORUS_FUNCTIONAL,
    AdemRelationData,
    PreconditionError,
    Unknown,
    action_defects,
    applicable_classes,
    assemble,
    cells,
    check_theta_psi,
    enumerate_b_choices,
    find_target,
    functional_constant,
    named_functional,
    secondary_rep,
    solve_structure,
    to_squares,
    diagonal_relation,
)
from ademcartan.steenrod import SqPolynomial, parse_sq


@pytest.fixture(scope="module")
def torus_system(torus):
    return assemble(torus, 3)


@pytest.fixture(scope="module")
def torus_solution(torus_system):
    return solve_structure(torus_system)


def test_cells():
    assert cells(2) == [(1, 1), (1, 2), (2, 2)]
    with pytest.raises(ValueError):
        assemble(load_model("point"), 0)


def test_point_system_is_trivially_consistent():
    S = assemble(load_model("point"), 3)
    sol = solve_structure(S)
    for m, n in cells(3):
        assert sol.action(m, n, [1, 1, 1, 1]) == 0


def test_torus_system_consistent(torus_system, torus_solution):
    S = torus_system
    assert S.n_unknowns == 1296 and S.n_rows > 0
    assert S.matrix.mul_vec(torus_solution.particular) == S.rhs
    assert not action_defects(torus_solution.action)


def test_torus_obstruction_functional(torus_system):
    f, c = named_functional(torus_system, TORUS_FUNCTIONAL)
    assert c == 1
    assert functional_constant(torus_system, f, 1)
    assert not functional_constant(torus_system, f, 0)


def test_zero_functional_is_constant(torus_system):
    assert functional_constant(torus_system, 0, 0)


def test_single_coordinate_is_free(torus_system):
    # one G^1_2 entry alone is not pinned down; only the symmetrised sum is
    f = torus_system.functional(1, 2, [("alpha", "beta", "alpha", "beta")], "alphabeta")
    assert not functional_constant(torus_system, f, 0)
    assert not functional_constant(torus_system, f, 1)


def test_functional_unknown_names(torus_system):
    with pytest.raises(KeyError):
        torus_system.functional(1, 2, [("alpha", "alpha", "alpha", "alpha")], "1")
    with pytest.raises(KeyError):
        named_functional(torus_system, "nope")


def test_inconsistent_system_reports_witness(torus_system):
    # append an equation 0 = 1 to an otherwise solvable system
    rows = list(torus_system.matrix.rows) + [0]
    S = dataclasses.replace(
        torus_system,
        matrix=GF2Matrix.from_rows(rows, torus_system.n_unknowns),
        rhs=torus_system.rhs | (1 << (len(rows) - 1)),
        row_labels=torus_system.row_labels + [Unknown(1, 1, (0, 0, 0, 0), 0)],
    )
    with pytest.raises(InconsistentSystem) as exc:
        solve_structure(S)
    assert exc.value.witness == [len(rows) - 1]
    assert S.witness_labels(exc.value.witness) == [Unknown(1, 1, (0, 0, 0, 0), 0)]


def test_mutated_model_changes_the_system(torus, torus_system):
    broken = torus.with_entry(2, "alphabeta", "alphabeta", 0)
    S = assemble(broken, 3)
    assert (S.rhs, S.matrix.rows) != (torus_system.rhs, torus_system.matrix.rows)


def test_torus_solve_is_fast(torus):
    t0 = time.perf_counter()
    solve_structure(assemble(torus, 3))
    assert time.perf_counter() - t0 < 10


# -- secondary operations --------------------------------------------------

def test_relation_data_validation():
    with pytest.raises(ValueError):
        AdemRelationData(((1, 1), (2, 1)), 1, (1, 1))
    with pytest.raises(ValueError):
        AdemRelationData(((1, 1),), 1, (1, 2))
    with pytest.raises(ValueError):
        AdemRelationData(((1, 1),), 1, (3, 1))
    R = AdemRelationData.from_polynomial(parse_sq("Sq^2 Sq^2 + Sq^3 Sq^1"), 2, (1, 2))
    assert set(R.pairs) == {(2, 2), (3, 1)} and R.output_degree == 5
    with pytest.raises(ValueError):
        AdemRelationData.from_polynomial(parse_sq("Sq^1"), 1, (1, 2))


@pytest.mark.parametrize("n,pairs", [(1, [(1, 1)]), (2, [(2, 2), (3, 1)]), (2, [(1, 1)])])
def test_secondary_invariant_under_b_choices_torus(torus, n, pairs):
    H = cohomology(torus)
    for target in find_target(n, pairs):
        R = AdemRelationData(tuple(pairs), n, target)
        G = solve_structure(assemble(torus, target[1] + 1)).action
        for h in applicable_classes(torus, H, R):
            assert len(enumerate_b_choices(torus, G, H.rep(h), R)) == 1


def test_secondary_invariant_under_b_choices_point():
    P = load_model("point")
    R = AdemRelationData((), 0, (1, 1))
    G = solve_structure(assemble(P, 2)).action
    assert enumerate_b_choices(P, G, 1, R) == {0}
    assert enumerate_b_choices(P, G, 0, R) == {0}


def test_secondary_depends_on_the_action(torus, torus_solution):
    # perturbing by the homogeneous kernel can move the class: the value is a
    # property of the chosen action, not of the cohomology alone
    H = cohomology(torus)
    R = AdemRelationData(((1, 1),), 1, (1, 1))
    c = torus.element("alpha")
    rng = random.Random(0)
    values = {secondary_rep(torus, torus_solution.perturbed(rng.getrandbits(torus_solution.kernel_dim)),
                            c, R, H=H).coords for _ in range(30)}
    assert values == {0, 1}


def test_secondary_preconditions(torus, torus_solution):
    G = torus_solution.action
    R = AdemRelationData(((1, 1),), 1, (1, 1))
    with pytest.raises(PreconditionError):
        secondary_rep(torus, G, torus.element("alphabeta"), R)
    s2 = load_model("s2")
    with pytest.raises(PreconditionError):
        secondary_rep(s2, None, s2.element("s0_1"), R)


@pytest.mark.parametrize("n,pairs", [(1, [(1, 1)]), (2, [(2, 2), (3, 1)]), (2, [(1, 1)])])
def test_theta_psi_on_solved_models(n, pairs):
    for name in ("torus", "s1", "point"):
        A = load_model(name)
        for target in find_target(n, pairs):
            R = AdemRelationData(tuple(pairs), n, target)
            G = solve_structure(assemble(A, target[1] + 1)).action
            results = check_theta_psi(A, R, G)
            assert all(r.ok for r in results), [r.text() for r in results if not r.ok]


def test_theta_psi_catches_a_non_solution(torus, torus_solution):
    R = AdemRelationData(((1, 1),), 1, (1, 1))
    G = torus_solution.action
    # with d = 0 an entry of G^m_n only enters the equations of cell n + 1,
    # so flip one in G^1_1 where the cells up to p + 1 = 2 can see it
    a, b = torus.index["alpha"], torus.index["beta"]
    w = (a, b, 0, 0)
    flipped = G.with_entry(1, 1, w, G(1, 1, [1 << j for j in w]) ^ (1 << a))
    assert action_defects(flipped)
    assert any(not r.ok for r in check_theta_psi(torus, R, flipped))


def test_theta_psi_needs_zero_differential():
    s2 = load_model("s2")
    with pytest.raises(ValueError):
        check_theta_psi(s2, AdemRelationData(((1, 1),), 1, (1, 1)), None)


# -- targets ---------------------------------------------------------------

def test_find_target_examples():
    assert find_target(1, [(1, 1)]) == [(1, 1), (2, 1)]
    assert find_target(2, [(2, 2), (3, 1)]) == [(1, 2), (2, 2)]
    assert find_target(1, [(5, 5)]) == []
    with pytest.raises(ValueError):
        find_target(1, [(1, 1), (2, 1)])
    with pytest.raises(ValueError):
        find_target(1, [])


def test_find_target_round_trip():
    # every cell's own diagonal relation is found again at that cell
    for p in range(0, 7):
        for m in range(1, p + 2):
            for n in range(1, 6):
                try:
                    poly = to_squares(diagonal_relation(m, p), n)
                except ValueError:
                    continue
                pairs = sorted(poly)
                if len({a + b for a, b in pairs}) > 1:
                    continue
                if pairs and 3 * n - (pairs[0][0] + pairs[0][1]) != p:
                    continue
                assert (m, p) in find_target(n, pairs, p=p, exact=True)


def test_to_squares_example():
    from ademcartan.tree4 import dd
    assert to_squares(dd(0, 1), 1) == SqPolynomial([(1, 0)])


@pytest.mark.parametrize("entry", [(0, "alpha", "beta", 0), (1, "alpha", "beta", 0b1000)])
def test_broken_torus_is_inconsistent(torus, entry):
    # the first breaks graded commutativity of the product, the second the grading
    S = assemble(torus.with_entry(*entry), 2)
    with pytest.raises(InconsistentSystem) as exc:
        solve_structure(S)
    witness = exc.value.witness
    assert witness
    total, rhs = 0, 0
    for r in witness:
        total ^= S.matrix.rows[r]
        rhs ^= (S.rhs >> r) & 1
    assert total == 0 and rhs == 1
