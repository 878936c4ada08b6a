"""Shape-2 trees ``e_x(e_a, e_b).sigma`` in arity 4 of the free operad on E.

Every tree is stored in canonical form: top and children untwisted, all
symmetric-group data pushed into ``sigma``.  Child twists become ``(2134)``
and ``(1243)`` on the right; a twisted top swaps the children and multiplies
by ``(3412)`` on the left.  With this form the canonical tuples are a basis,
so F2-linear algebra is symmetric difference of sets.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable, NamedTuple

from .bar import BarElem
from .gf2 import Perm, binom_may

ID4 = Perm((1, 2, 3, 4))
SWAP_LEFT = Perm((2, 1, 3, 4))
SWAP_RIGHT = Perm((1, 2, 4, 3))
SWAP_BLOCKS = Perm((3, 4, 1, 2))
P2143 = Perm((2, 1, 4, 3))
P4321 = Perm((4, 3, 2, 1))
P3214 = Perm((3, 2, 1, 4))

_CHILD_TWIST = {
    (0, 0): ID4,
    (1, 0): SWAP_LEFT,
    (0, 1): SWAP_RIGHT,
    (1, 1): SWAP_LEFT * SWAP_RIGHT,
}


class Tree2Elem(NamedTuple):
    x: int
    a: int
    b: int
    sigma: Perm

    @property
    def degree(self) -> int:
        return -(self.x + self.a + self.b)

    def __str__(self) -> str:
        return f"e_{self.x}(e_{self.a},e_{self.b}).{self.sigma}"


def normalize(top: BarElem, left: BarElem, right: BarElem, sigma: Perm = ID4) -> Tree2Elem:
    """Canonical tuple of ``top(left, right).sigma``."""
    if min(top.index, left.index, right.index) < 0:
        raise ValueError("negative bar index")
    s = _CHILD_TWIST[left.twist, right.twist] * sigma
    a, b = left.index, right.index
    if top.twist:
        a, b = b, a
        s = SWAP_BLOCKS * s
    return Tree2Elem(top.index, a, b, s)


def _sort_key(t: Tree2Elem):
    return (t.x, t.a, t.b, tuple(t.sigma))


class Tree2Sum(frozenset):
    """Formal F2-sum of canonical shape-2 trees."""

    def __new__(cls, terms: Iterable[Tree2Elem] = ()):
        out: set[Tree2Elem] = set()
        for t in terms:
            out ^= {t}
        return super().__new__(cls, out)

    @classmethod
    def _raw(cls, terms) -> Tree2Sum:
        return frozenset.__new__(cls, terms)

    def __add__(self, other: Tree2Sum) -> Tree2Sum:
        return Tree2Sum._raw(frozenset.__xor__(self, other))

    __xor__ = __add__

    def act(self, tau: Perm) -> Tree2Sum:
        return act(self, tau)

    def twist_F(self) -> Tree2Sum:
        return twist_F(self)

    def degrees(self) -> set[int]:
        return {t.degree for t in self}

    def sorted_terms(self) -> list[Tree2Elem]:
        return sorted(self, key=_sort_key)

    def __str__(self) -> str:
        return " + ".join(str(t) for t in self.sorted_terms()) or "0"

    def __repr__(self) -> str:
        return f"Tree2Sum({str(self)})"


ZERO = Tree2Sum()


def tree(x: int, a: int, b: int, sigma: Perm = ID4, *, top: int = 0, left: int = 0, right: int = 0) -> Tree2Sum:
    """``e_x.top(e_a.left, e_b.right).sigma`` as a sum; negative indices give zero."""
    if min(x, a, b) < 0:
        return ZERO
    return Tree2Sum._raw((normalize(BarElem(x, top), BarElem(a, left), BarElem(b, right), sigma),))


def act(s: Tree2Sum, tau: Perm) -> Tree2Sum:
    """Right action of ``tau`` in Sigma_4."""
    return Tree2Sum._raw(frozenset(Tree2Elem(t.x, t.a, t.b, t.sigma * tau) for t in s))


def act_sum(s: Tree2Sum, taus: Iterable[Perm]) -> Tree2Sum:
    """Right action of the group-ring element ``sum(taus)``."""
    out = ZERO
    for tau in taus:
        out = out + act(s, tau)
    return out


def twist_F(s: Tree2Sum) -> Tree2Sum:
    """Twist the top operation: ``e_x(e_a, e_b).sigma -> e_x.(21)(e_a, e_b).sigma``."""
    return Tree2Sum._raw(frozenset(Tree2Elem(t.x, t.b, t.a, SWAP_BLOCKS * t.sigma) for t in s))


def _d_term(t: Tree2Elem) -> set[Tree2Elem]:
    x, a, b, s = t
    out: set[Tree2Elem] = set()
    if x > 0:
        out ^= {Tree2Elem(x - 1, a, b, s), Tree2Elem(x - 1, b, a, SWAP_BLOCKS * s)}
    if a > 0:
        out ^= {Tree2Elem(x, a - 1, b, s), Tree2Elem(x, a - 1, b, SWAP_LEFT * s)}
    if b > 0:
        out ^= {Tree2Elem(x, a, b - 1, s), Tree2Elem(x, a, b - 1, SWAP_RIGHT * s)}
    return out


def d_tree(s: Tree2Sum) -> Tree2Sum:
    """Leibniz differential; raises degree by one."""
    out: set[Tree2Elem] = set()
    for t in s:
        out ^= _d_term(t)
    return Tree2Sum._raw(frozenset(out))


# ---------------------------------------------------------------------------
# the elements u and alpha

def _block(m: int) -> int:
    """``2^(k+1)`` for the unique ``k`` with ``2^k <= m < 2^(k+1)``."""
    return 1 << m.bit_length()


@lru_cache(maxsize=None)
def u(m: int, n: int, x: int) -> Tree2Sum:
    """The element ``[u^m_n]_x`` of degree ``-(n + x)``."""
    if m <= 0:
        raise ValueError(f"u requires m >= 1, got m={m}")
    if x < 0 or n < 0:
        return ZERO
    top = (m - 1) & 1
    if n == 0:
        return tree(x, 0, 0, top=top)
    K = _block(m)
    out: set[Tree2Elem] = set()
    for i in range(K):
        if not binom_may(n - m + i, m - 1):
            continue
        plain = binom_may(i, m)
        twisted = binom_may(i - 1, m)
        if not (plain or twisted):
            continue
        # 0 <= K*delta - i <= n
        delta = -(-i // K)
        while K * delta - i <= n:
            left = K * delta - i
            right = n - left
            if plain:
                out ^= {normalize(BarElem(x, top), BarElem(left), BarElem(right))}
            if twisted:
                out ^= {normalize(BarElem(x, top), BarElem(left), BarElem(right, 1))}
            delta += 1
    return Tree2Sum._raw(frozenset(out))


@lru_cache(maxsize=None)
def alpha(n: int, p: int) -> Tree2Sum:
    """``alpha_{n,p}`` of degree ``-n``; zero for ``p < 0`` or ``p > n``."""
    if p < 0:
        return ZERO
    out = ZERO
    for s in range(0, n - p + 1):
        out = out + u(s + 1, s + p, n - s - p)
    for s in range(0, n - p):
        out = out + act(u(s + 1, s + p + 1, n - s - p - 1), SWAP_BLOCKS)
    return out


# ---------------------------------------------------------------------------
# diagonal evaluation

class DiagSymbol(NamedTuple):
    """``e_x(D_a, D_b)`` on a diagonal argument, with ``a <= b``.

    When ``a == b`` this is the iterated square ``D_x D_a``.
    """

    x: int
    a: int
    b: int

    def __str__(self) -> str:
        if self.a == self.b:
            return f"D_{self.x}D_{self.a}"
        return f"e_{self.x}(D_{self.a},D_{self.b})"


class DiagSum(frozenset):
    def __str__(self) -> str:
        return " + ".join(str(t) for t in sorted(self)) or "0"

    def __repr__(self) -> str:
        return f"DiagSum({str(self)})"


def diagonal_coeff(s: Tree2Sum) -> DiagSum:
    """Value of ``s`` on ``(c, c, c, c)`` in a graded algebra, as formal symbols.

    On the diagonal the permutation is absorbed, each child is some ``D_j(c)``
    and the top is commutative up to a boundary, so a term only remembers the
    unordered pair of child indices.
    """
    out: set[DiagSymbol] = set()
    for t in s:
        out ^= {DiagSymbol(t.x, min(t.a, t.b), max(t.a, t.b))}
    return DiagSum(out)


def dd(x: int, h: int) -> DiagSum:
    """The single symbol ``D_x D_h``."""
    return DiagSum({DiagSymbol(x, h, h)})


def adem_diagonal(n: int, p: int) -> tuple[DiagSum, DiagSum]:
    return diagonal_coeff(alpha(n, p)), diagonal_coeff(alpha(n, n - p))


def adem_diagonal_closed_form(n: int, p: int) -> DiagSum:
    """Closed form of ``diagonal_coeff(alpha(n, p))`` read off from the Adem derivation."""
    out: set[DiagSymbol] = set()
    if p < 0:
        return DiagSum()
    for s in range(0, n - p + 1):
        if (p + s) % 2:
            continue
        c = binom_may(p - s, 2 * s - 1) ^ binom_may(p - s - 2, 2 * s + 1)
        if c:
            h = (p + s) // 2
            out ^= {DiagSymbol(n - p - s, h, h)}
    return DiagSum(out)


# ---------------------------------------------------------------------------
# identity sweeps

def umm_expression(m: int, x: int) -> Tree2Sum:
    """``e_x.(21)^{m-1}(e_0, e_m) + e_x.(21)^{m-1}(e_m, e_0.(21))``."""
    top = (m - 1) & 1
    return tree(x, 0, m, top=top) + tree(x, m, 0, top=top, right=1)


def du_rhs(m: int, n: int, x: int) -> Tree2Sum:
    """Right side of the differential of ``[u^{m+1}_{n+1}]_x``."""
    a = u(m + 1, n, x)
    b = u(m, n, x)
    c = u(m + 1, n + 1, x - 1)
    return a + act(a, P2143) + twist_F(b) + act(b, P4321) + c + twist_F(c)


def dalpha_rhs(n: int, p: int) -> Tree2Sum:
    a = alpha(n - 1, p - 1)
    b = alpha(n - 1, p)
    return a + act(a, P2143) + b + act(b, P4321)


def check_identities(max_m: int = 12, max_n: int = 16, max_x: int = 6):
    """Sweep the four defining relations of ``u`` and ``alpha``.

    Yields one :class:`~ademcartan.report.CheckResult` per parameter tuple.
    """
    from .report import CheckResult

    for m in range(1, max_m + 1):
        for x in range(0, max_x + 1):
            for n in range(1, min(m, max_n + 1)):
                s = u(m, n, x)
                yield CheckResult("unmzero", {"m": m, "n": n, "x": x}, not s, str(s) if s else "")
            if m <= max_n:
                diff = u(m, m, x) + umm_expression(m, x)
                yield CheckResult("umm", {"m": m, "x": x}, not diff, str(diff) if diff else "")
    for m in range(1, max_m):
        for n in range(0, max_n):
            for x in range(0, max_x + 1):
                diff = d_tree(u(m + 1, n + 1, x)) + du_rhs(m, n, x)
                yield CheckResult("du", {"m": m, "n": n, "x": x}, not diff, str(diff) if diff else "")
    for n in range(0, max_n + 1):
        for p in range(-2, n + 3):
            diff = d_tree(alpha(n, p)) + dalpha_rhs(n, p)
            yield CheckResult("dalpha", {"n": n, "p": p}, not diff, str(diff) if diff else "")


def lemma332_expected(m: int, n: int, x: int) -> DiagSum:
    """``(n - 2m, 2m - 1) D_x D_{n/2}`` for even ``n``, else zero."""
    if n % 2 or not binom_may(n - 2 * m, 2 * m - 1):
        return DiagSum()
    return dd(x, n // 2)


def adem_side_symbols(w: int, v: int) -> DiagSum:
    """``sum_l (l, w-2l) D_{v-w+2l} D_{w-l}``, negative indices dropped."""
    out: set[DiagSymbol] = set()
    for l in range(0, w // 2 + 1):
        if binom_may(l, w - 2 * l):
            x, h = v - w + 2 * l, w - l
            if x >= 0 and h >= 0:
                out ^= {DiagSymbol(x, h, h)}
    return DiagSum(out)


def check_diagonal(max_m: int = 8, max_n: int = 16, max_x: int = 4, max_adem: int = 24):
    """Diagonal evaluation statements, taken literally.

    ``lemma332`` compares ``diagonal_coeff(u(m,n,x))`` with the closed form;
    ``adem_diagonal`` asks the two components to agree as formal symbols.
    """
    from .report import CheckResult

    for m in range(1, max_m + 1):
        for n in range(0, max_n + 1):
            for x in range(0, max_x + 1):
                got = diagonal_coeff(u(m, n, x))
                want = lemma332_expected(m, n, x)
                ok = got == want
                yield CheckResult("lemma332", {"m": m, "n": n, "x": x}, ok,
                                  "" if ok else f"got {got}, expected {want}")
    for n in range(0, max_adem + 1):
        for p in range(0, n + 1):
            left, right = adem_diagonal(n, p)
            ok = left == right
            yield CheckResult("adem_diagonal", {"n": n, "p": p}, ok,
                              "" if ok else f"{left} != {right}")
