"""The standard free resolution of F2 over F2[Sigma_2].

In degree ``-i`` the resolution has basis ``e_i`` and ``e_i.(21)``; the
differential is ``d(e_i) = e_{i-1} + e_{i-1}.(21)`` with ``e_{-1} = 0``.
"""

from __future__ import annotations

from typing import Iterable, NamedTuple


class BarElem(NamedTuple):
    index: int
    twist: int = 0

    @property
    def degree(self) -> int:
        return -self.index

    def swapped(self) -> BarElem:
        return BarElem(self.index, self.twist ^ 1)

    def __str__(self) -> str:
        return f"e_{self.index}.(21)" if self.twist else f"e_{self.index}"


class BarSum(frozenset):
    """Formal F2-sum of basis elements; ``+`` is symmetric difference."""

    def __new__(cls, terms: Iterable[BarElem] = ()):
        out: set[BarElem] = set()
        for t in terms:
            if t.index < 0:
                continue
            out ^= {BarElem(int(t.index), int(t.twist) & 1)}
        return super().__new__(cls, out)

    def __add__(self, other: BarSum) -> BarSum:
        return BarSum._raw(self ^ other)

    @classmethod
    def _raw(cls, terms: frozenset) -> BarSum:
        return frozenset.__new__(cls, terms)

    def act(self) -> BarSum:
        """Right multiplication by the transposition (21)."""
        return BarSum._raw(frozenset(t.swapped() for t in self))

    def sorted_terms(self) -> list[BarElem]:
        return sorted(self)

    def __str__(self) -> str:
        return " + ".join(str(t) for t in self.sorted_terms()) or "0"

    def __repr__(self) -> str:
        return f"BarSum({str(self)})"


def e(i: int, twist: int = 0) -> BarSum:
    return BarSum([BarElem(i, twist)])


def d_bar(s: BarSum) -> BarSum:
    out: set[BarElem] = set()
    for t in s:
        if t.index == 0:
            continue
        out ^= {BarElem(t.index - 1, t.twist), BarElem(t.index - 1, t.twist ^ 1)}
    return BarSum._raw(frozenset(out))


class PsiSum(frozenset):
    """Formal sum of pairs ``(left, right)`` of basis elements."""

    def __str__(self) -> str:
        return " + ".join(f"{a}(x){b}" for a, b in sorted(self)) or "0"


def psi(n: int) -> PsiSum:
    """The diagonal on ``e_n``: ``sum_j e_j (x) e_{n-j}.(21)^j``."""
    if n < 0:
        raise ValueError("psi is defined for n >= 0")
    return PsiSum((BarElem(j), BarElem(n - j, j & 1)) for j in range(n + 1))
