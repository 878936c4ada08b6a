"""Arity-4 G-actions on finite cup algebras and chain-level secondary operations.

An action assigns to every cell ``G^m_n`` (``1 <= m <= n <= N``) a map
``A^{(x)4} -> A`` of degree ``-n``.  Compatibility with the cell differential,
evaluated on basis 4-tuples, is a linear system over F2 in the matrix entries
of those maps.  The solution space is affine; invariants of it (such as the
torus obstruction) are decided by checking a functional against the kernel.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Iterator, NamedTuple, Sequence

from .cochains import Cls, CohomologyModel, CupAlgebra, cohomology, eval_tree
from .gcells import dG, g_vanishes, p_of
from .gf2 import (
    GF2Matrix,
    InconsistentSystem,
    Quotient,
    inconsistency_witness,
    parity,
    quotient_basis,
    solve_affine,
    support,
)
from .report import CheckResult
from .steenrod import SqPolynomial, acts_trivially
from .tree4 import DiagSum, alpha, diagonal_coeff

# ---------------------------------------------------------------------------
# the constraint system


class Unknown(NamedTuple):
    """Coefficient of basis vector ``k`` in ``G^m_n(w)`` for a basis tuple ``w``."""

    m: int
    n: int
    w: tuple[int, int, int, int]
    k: int


def _basis_tuples(A: CupAlgebra) -> list[tuple[int, int, int, int]]:
    return list(product(range(A.size), repeat=4))


def _tuple_degree(A: CupAlgebra, w: Sequence[int]) -> int:
    return sum(A.degrees[j] for j in w)


def _permute(w: Sequence, sigma) -> tuple:
    """Arguments seen by ``X.sigma``: slot ``j`` gets ``w[sigma^{-1}(j)]``."""
    inv = sigma.inverse()
    return tuple(w[inv(j) - 1] for j in range(1, 5))


def cells(n_max: int) -> list[tuple[int, int]]:
    return [(m, n) for n in range(1, n_max + 1) for m in range(1, n + 1)]


@dataclass
class ConstraintSystem:
    algebra: CupAlgebra
    n_max: int
    unknowns: list[Unknown]
    matrix: GF2Matrix
    rhs: int
    row_labels: list[Unknown]
    column: dict[Unknown, int] = field(repr=False)

    @property
    def n_unknowns(self) -> int:
        return len(self.unknowns)

    @property
    def n_rows(self) -> int:
        return self.matrix.nrows

    def functional(self, m: int, n: int, tuples: Sequence[Sequence[str]], target: str) -> int:
        """Sum over ``tuples`` of the coefficient of ``target`` in ``G^m_n(tuple)``."""
        A = self.algebra
        f = 0
        for names in tuples:
            key = Unknown(m, n, tuple(A.index[s] for s in names), A.index[target])
            col = self.column.get(key)
            if col is None:
                raise KeyError(f"no unknown for {key}")
            f ^= 1 << col
        return f

    def witness_labels(self, witness: Sequence[int]) -> list[Unknown]:
        return [self.row_labels[r] for r in witness]


def assemble(A: CupAlgebra, n_max: int) -> ConstraintSystem:
    """Linear constraints that ``d(G(w)) = (dG)(w) + G(dw)`` imposes on every basis tuple.

    The tree part of ``dG`` is moved to the right-hand side; the G-part stays
    among the unknowns.  Only degree-compatible entries are unknowns.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    top = A.top_degree
    tuples = _basis_tuples(A)
    unknowns: list[Unknown] = []
    column: dict[Unknown, int] = {}
    for m, n in cells(n_max):
        for w in tuples:
            t = _tuple_degree(A, w) - n
            if 0 <= t <= top:
                for k in A.basis(t):
                    column[Unknown(m, n, w, k)] = len(unknowns)
                    unknowns.append(Unknown(m, n, w, k))

    def bit(m: int, n: int, w: tuple, k: int) -> int:
        col = column.get(Unknown(m, n, w, k))
        return 0 if col is None else 1 << col

    rows: list[int] = []
    rhs = 0
    labels: list[Unknown] = []
    for m, n in cells(n_max):
        cell = dG(m, n)
        for w in tuples:
            t = _tuple_degree(A, w) - n + 1
            if not 0 <= t <= top:
                continue
            tail = eval_tree(cell.tpart, A, [1 << j for j in w]) if cell.tpart else 0
            # a non-graded model can put tree terms where no unknown can cancel them
            for k in support(tail):
                if A.degrees[k] != t:
                    rhs |= 1 << len(rows)
                    rows.append(0)
                    labels.append(Unknown(m, n, w, k))
            for k in A.basis(t):
                row = 0
                # d_A(G(w))
                for k2 in A.basis(t - 1):
                    if (A.d[k2] >> k) & 1:
                        row ^= bit(m, n, w, k2)
                # G(d w), slot by slot
                for slot in range(4):
                    for j in support(A.d[w[slot]]):
                        w2 = w[:slot] + (j,) + w[slot + 1:]
                        row ^= bit(m, n, w2, k)
                # G-part of dG applied to w
                for g in cell.gpart:
                    row ^= bit(g.m, g.n, _permute(w, g.sigma), k)
                b = (tail >> k) & 1
                if row or b:
                    if b:
                        rhs |= 1 << len(rows)
                    rows.append(row)
                    labels.append(Unknown(m, n, w, k))
    matrix = GF2Matrix.from_rows(rows, len(unknowns))
    return ConstraintSystem(A, n_max, unknowns, matrix, rhs, labels, column)


# ---------------------------------------------------------------------------
# actions


@dataclass
class GAction:
    """Multilinear maps ``G^m_n``; ``maps[(m, n)][w]`` is the image of a basis tuple."""

    algebra: CupAlgebra
    n_max: int
    maps: dict[tuple[int, int], dict[tuple, int]]

    @classmethod
    def from_vector(cls, S: ConstraintSystem, x: int) -> GAction:
        maps: dict[tuple[int, int], dict[tuple, int]] = {mn: {} for mn in cells(S.n_max)}
        for col in support(x):
            key = S.unknowns[col]
            table = maps[(key.m, key.n)]
            table[key.w] = table.get(key.w, 0) ^ (1 << key.k)
        return cls(S.algebra, S.n_max, maps)

    @classmethod
    def zero(cls, A: CupAlgebra, n_max: int) -> GAction:
        return cls(A, n_max, {mn: {} for mn in cells(n_max)})

    def __call__(self, m: int, n: int, args: Sequence[int]) -> int:
        """``G^m_n(args)`` for arbitrary elements, extended multilinearly; zero off range."""
        if g_vanishes(m, n) or n > self.n_max:
            return 0
        table = self.maps[(m, n)]
        out = 0
        for w in product(*(support(a) for a in args)):
            out ^= table.get(w, 0)
        return out

    def with_entry(self, m: int, n: int, w: tuple, value: int) -> GAction:
        maps = {mn: dict(t) for mn, t in self.maps.items()}
        maps[(m, n)][tuple(w)] = value
        return GAction(self.algebra, self.n_max, maps)


def action_defects(G: GAction) -> list[CheckResult]:
    """Re-substitute an action into the cell differential on every basis tuple.

    Works on whole elements through :class:`GAction`, independently of the
    unknown numbering used by :func:`assemble`.
    """
    A = G.algebra
    top = A.top_degree
    out = []
    for m, n in cells(G.n_max):
        cell = dG(m, n)
        for w in _basis_tuples(A):
            t = _tuple_degree(A, w) - n + 1
            if not 0 <= t <= top:
                continue
            args = [1 << j for j in w]
            value = A.dvec(G(m, n, args))
            for slot in range(4):
                moved = list(args)
                moved[slot] = A.dvec(args[slot])
                if moved[slot]:
                    value ^= G(m, n, moved)
            for g in cell.gpart:
                value ^= G(g.m, g.n, _permute(args, g.sigma))
            value ^= eval_tree(cell.tpart, A, args)
            if value:
                out.append(CheckResult("action", {"m": m, "n": n, "w": "|".join(A.names[j] for j in w)},
                                       False, A.render(value)))
    return out


@dataclass
class StructureSolution:
    system: ConstraintSystem
    particular: int
    kernel: list[int]

    @cached_property
    def action(self) -> GAction:
        return GAction.from_vector(self.system, self.particular)

    def perturbed(self, combo: int) -> GAction:
        """Particular solution plus the kernel vectors selected by ``combo``."""
        x = self.particular
        for j in support(combo):
            x ^= self.kernel[j]
        return GAction.from_vector(self.system, x)

    @property
    def kernel_dim(self) -> int:
        return len(self.kernel)


def solve_structure(S: ConstraintSystem) -> StructureSolution:
    """Particular solution and homogeneous kernel; raises :class:`InconsistentSystem`."""
    sol = solve_affine(S.matrix, S.rhs)
    if sol is None:
        raise InconsistentSystem(inconsistency_witness(S.matrix, S.rhs) or [])
    result = StructureSolution(S, sol.particular, list(sol.kernel))
    defects = action_defects(result.action)
    if defects:
        raise AssertionError(f"solver returned a non-solution: {defects[0].text()}")
    return result


def functional_constant(S: ConstraintSystem, f: int, c: int) -> bool:
    """Whether the functional ``f`` equals ``c`` on every solution of ``S``."""
    sol = solve_affine(S.matrix, S.rhs)
    if sol is None:
        raise InconsistentSystem(inconsistency_witness(S.matrix, S.rhs) or [])
    if any(parity(f & k) for k in sol.kernel):
        return False
    return parity(f & sol.particular) == (c & 1)


TORUS_FUNCTIONAL = "torus-g12"


def named_functional(S: ConstraintSystem, name: str) -> tuple[int, int]:
    """Functionals the CLI knows by name, with the constant they are tested against."""
    if name == TORUS_FUNCTIONAL:
        f = S.functional(1, 2, [("alpha", "beta", "alpha", "beta"), ("beta", "alpha", "beta", "alpha")],
                         "alphabeta")
        return f, 1
    raise KeyError(f"unknown functional {name!r}")


# ---------------------------------------------------------------------------
# secondary operations


@dataclass(frozen=True)
class AdemRelationData:
    """``sum_i Sq^{m_i} Sq^{n_i}`` on classes of degree ``class_degree``, with its target cell."""

    pairs: tuple[tuple[int, int], ...]
    class_degree: int
    target: tuple[int, int]

    def __post_init__(self) -> None:
        totals = {a + b for a, b in self.pairs}
        if len(totals) > 1:
            raise ValueError("relation is not homogeneous")
        m, p = self.target
        if m < 1 or p + 1 < m:
            raise ValueError("target needs 1 <= m <= p + 1")
        if self.pairs and p != 3 * self.class_degree - totals.pop():
            raise ValueError("target p must equal 3n - (m_i + n_i)")

    @classmethod
    def from_polynomial(cls, poly: SqPolynomial, class_degree: int, target: tuple[int, int]) -> AdemRelationData:
        pairs = []
        for mono in poly.sorted_terms():
            if len(mono) != 2:
                raise ValueError("relations must be sums of length-2 monomials")
            pairs.append((mono[0], mono[1]))
        return cls(tuple(pairs), class_degree, target)

    @property
    def p(self) -> int:
        return self.target[1]

    @property
    def output_degree(self) -> int:
        return 4 * self.class_degree - self.p - 1


class PreconditionError(ValueError):
    pass


def _bounding_chain(A: CupAlgebra, y: int, degree: int) -> tuple[int, list[int]]:
    """Some ``b`` of the given degree with ``d b = y``, plus the cocycles of that degree."""
    D = A.d_matrix(degree)
    sol = solve_affine(D, A.local(degree + 1, y))
    if sol is None:
        raise PreconditionError("class is not zero, so no bounding chain exists")
    return A.globalize(degree, sol.particular), [A.globalize(degree, k) for k in sol.kernel]


def secondary_quotient(A: CupAlgebra, H: CohomologyModel, R: AdemRelationData) -> Quotient:
    """``H^{4n-p-1} / sum_i Im Sq^{m_i}``, realised on cocycles."""
    deg = R.output_degree
    cocycles = [A.globalize(deg, v) for v in A.d_matrix(deg).kernel()]
    indeterminacy = [A.d[j] for j in A.basis(deg - 1) if A.d[j]]
    for m_i, n_i in R.pairs:
        src = R.class_degree + n_i - 1
        for h in H.basis(src):
            c = H.rep(h)
            indeterminacy.append(A.e(src - m_i, c, c))
    return quotient_basis(cocycles, [v for v in indeterminacy if v])


def b_choice_space(A: CupAlgebra, c: int, R: AdemRelationData) -> list[tuple[int, list[int]]]:
    """For each pair, a bounding chain ``b_i`` of ``e_{n-n_i}(c, c)`` and the space of alternatives."""
    n = R.class_degree
    out = []
    for _, n_i in R.pairs:
        y = A.e(n - n_i, c, c)
        out.append(_bounding_chain(A, y, n + n_i - 1))
    return out


@dataclass(frozen=True)
class SecondaryClass:
    degree: int
    coords: int
    cocycle: int

    def record(self) -> dict:
        return {"degree": self.degree, "coords": format(self.coords, "b") if self.coords else "0"}


def secondary_rep(A: CupAlgebra, G: GAction, c: int, R: AdemRelationData, *,
                  H: CohomologyModel | None = None,
                  shifts: Sequence[int] | None = None) -> SecondaryClass:
    """``G^m_{p+1}(c,c,c,c) + b`` projected to ``H / sum_i Im Sq^{m_i}``.

    ``b = sum_i e_{n-m_i+n_i}(b_i, e_{n-n_i}(c,c)) + e_{n-m_i+n_i-1}(b_i, b_i)``
    with ``d b_i = e_{n-n_i}(c, c)``.  ``shifts[i]`` is added to ``b_i`` to
    explore other choices.
    """
    H = H or cohomology(A)
    n = R.class_degree
    m, p = R.target
    if A.dvec(c):
        raise PreconditionError("c is not a cocycle")
    if c and A.degree_of(c) != n:
        raise PreconditionError("c has the wrong degree")
    choices = b_choice_space(A, c, R)
    b = 0
    for idx, ((m_i, n_i), (b_i, _)) in enumerate(zip(R.pairs, choices)):
        if shifts is not None:
            b_i ^= shifts[idx]
        y = A.e(n - n_i, c, c)
        j = n - m_i + n_i
        b ^= A.e(j, b_i, y) ^ A.e(j - 1, b_i, b_i)
    theta = G(m, p + 1, [c, c, c, c])
    total = theta ^ b
    if A.dvec(total):
        raise ArithmeticError("G(c,c,c,c) + b is not a cocycle; the action does not realise the relation")
    Q = secondary_quotient(A, H, R)
    return SecondaryClass(R.output_degree, Q.project(total), total)


def enumerate_b_choices(A: CupAlgebra, G: GAction, c: int, R: AdemRelationData, *,
                        limit_dim: int = 12, samples: int = 256, rng=None) -> set[int]:
    """Secondary classes over all choices of the ``b_i`` (sampled above ``limit_dim``)."""
    import random

    H = cohomology(A)
    spaces = [alt for _, alt in b_choice_space(A, c, R)]
    flat = [(i, v) for i, alt in enumerate(spaces) for v in alt]
    combos: Iterator[int]
    if len(flat) <= limit_dim:
        combos = iter(range(1 << len(flat)))
    else:
        rng = rng or random.Random(0)
        combos = iter([rng.getrandbits(len(flat)) for _ in range(samples)])
    seen = set()
    for combo in combos:
        shifts = [0] * len(R.pairs)
        for bit in support(combo):
            i, v = flat[bit]
            shifts[i] ^= v
        seen.add(secondary_rep(A, G, c, R, H=H, shifts=shifts).coords)
    return seen


def applicable_classes(A: CupAlgebra, H: CohomologyModel, R: AdemRelationData) -> list[Cls]:
    """Classes of degree ``n`` on which every ``Sq^{n_i}`` vanishes."""
    from .cochains import sq

    n = R.class_degree
    return [h for h in H.classes(n)
            if all(sq(A, H, h, n_i).coords == 0 for _, n_i in R.pairs)]


def check_theta_psi(A: CupAlgebra, R: AdemRelationData, G: GAction) -> list[CheckResult]:
    """Compare ``pi theta(x)`` with the chain-level secondary class on every applicable class.

    ``theta(x) = G^m_{p+1}(x,x,x,x)`` on the stored representative.  The
    comparison is only meaningful for an honest action, so the report also
    carries the re-substitution check of ``G`` on the cells up to ``p + 1``.
    """
    if not A.is_graded:
        raise ValueError("check_theta_psi needs a model with zero differential")
    H = cohomology(A)
    m, p = R.target
    Q = secondary_quotient(A, H, R)
    out: list[CheckResult] = []
    defects = [r for r in action_defects(G) if r.params["n"] <= p + 1]
    out.extend(defects)
    for h in applicable_classes(A, H, R):
        c = H.rep(h)
        theta = Q.project(G(m, p + 1, [c, c, c, c]))
        try:
            psi_cls = secondary_rep(A, G, c, R, H=H).coords
            ok = theta == psi_cls and not defects
            detail = "" if ok else f"theta={theta:b} psi={psi_cls:b}"
        except ArithmeticError as exc:
            ok, detail = False, str(exc)
        out.append(CheckResult("theta_psi", {"model": A.label, "class": H.render(h), "m": m, "p": p},
                               ok, detail))
    return out


# ---------------------------------------------------------------------------
# locating the cell that realises a relation


def diagonal_relation(m: int, p: int) -> DiagSum:
    """Diagonal value of the tree tail of ``dG^m_{p+1}``."""
    q = p_of(m)
    a = diagonal_coeff(alpha(p, p - q))
    b = diagonal_coeff(alpha(p, q))
    return DiagSum(a ^ b)


def to_squares(s: DiagSum, n: int) -> SqPolynomial:
    """Rewrite ``D_x D_h`` on a class of degree ``n`` as ``Sq^{2n-h-x} Sq^{n-h}``."""
    terms = []
    for sym in s:
        if sym.a != sym.b:
            raise ValueError(f"{sym} is not an iterated square")
        terms.append((2 * n - sym.a - sym.x, n - sym.a))
    return SqPolynomial(terms)


def _unstable_part(poly: SqPolynomial, n: int) -> SqPolynomial:
    return SqPolynomial(mono for mono in poly if not acts_trivially(mono, n))


def find_target(n: int, pairs: Sequence[tuple[int, int]], *, p: int | None = None,
                exact: bool = False) -> list[tuple[int, int]]:
    """Cells ``(m, p)`` whose diagonal differential is the relation ``sum Sq^{m_i} Sq^{n_i}``.

    ``p = 3n - (m_i + n_i)``; for an empty relation it must be passed in.
    With ``exact=False`` monomials that vanish on degree-``n`` classes by
    instability are ignored on both sides.
    """
    totals = {a + b for a, b in pairs}
    if len(totals) > 1:
        raise ValueError("relation is not homogeneous")
    if totals:
        implied = 3 * n - totals.pop()
        if p is not None and p != implied:
            raise ValueError(f"p must be {implied} for this relation")
        p = implied
    elif p is None:
        raise ValueError("an empty relation needs an explicit p")
    if p < 0:
        return []
    wanted = SqPolynomial(pairs)
    out = []
    for m in range(1, p + 2):
        got = to_squares(diagonal_relation(m, p), n)
        if exact:
            lhs, rhs = got, wanted
        else:
            lhs, rhs = _unstable_part(got, n), _unstable_part(wanted, n)
        if lhs == rhs:
            out.append((m, p))
    return out
