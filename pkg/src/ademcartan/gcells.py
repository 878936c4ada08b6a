"""Arity-4 cells ``G^m_n`` and their differential.

``dG^m_n`` mixes lower G-cells (acted on by group-ring elements of Sigma_4)
with a tail of shape-2 trees built from the alpha elements.  The module also
checks ``d o d = 0`` on every cell, which is what allows the cells to be
attached at all.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, NamedTuple

from .gf2 import Perm
from .tree4 import (
    ID4,
    P2143,
    P3214,
    P4321,
    ZERO,
    Tree2Sum,
    act,
    alpha,
    d_tree,
)


class GElem(NamedTuple):
    m: int
    n: int
    sigma: Perm

    @property
    def degree(self) -> int:
        return -self.n

    def __str__(self) -> str:
        return f"G^{self.m}_{self.n}.{self.sigma}"


def g_vanishes(m: int, n: int) -> bool:
    return m <= 0 or n < m


@dataclass(frozen=True)
class GMixedSum:
    """``sum of G^m_n.sigma`` plus a tree tail, over F2."""

    gpart: frozenset = frozenset()
    tpart: Tree2Sum = ZERO

    @classmethod
    def make(cls, gterms: Iterable[GElem] = (), tpart: Tree2Sum = ZERO) -> GMixedSum:
        g: set[GElem] = set()
        for t in gterms:
            if not g_vanishes(t.m, t.n):
                g ^= {t}
        return cls(frozenset(g), tpart)

    def __add__(self, other: GMixedSum) -> GMixedSum:
        return GMixedSum(self.gpart ^ other.gpart, self.tpart + other.tpart)

    def act(self, tau: Perm) -> GMixedSum:
        return GMixedSum(
            frozenset(GElem(g.m, g.n, g.sigma * tau) for g in self.gpart),
            act(self.tpart, tau),
        )

    def is_zero(self) -> bool:
        return not self.gpart and not self.tpart

    def __bool__(self) -> bool:
        return not self.is_zero()

    def degrees(self) -> set[int]:
        return {g.degree for g in self.gpart} | self.tpart.degrees()

    def __str__(self) -> str:
        gs = sorted(self.gpart, key=lambda g: (g.m, g.n, tuple(g.sigma)))
        parts = [str(g) for g in gs]
        if self.tpart:
            parts.append(str(self.tpart))
        return " + ".join(parts) or "0"


def p_of(m: int) -> int:
    """Integer part of ``(m - 1) / 2``."""
    return (m - 1) // 2


@lru_cache(maxsize=None)
def dG(m: int, n: int) -> GMixedSum:
    """Differential of ``G^m_n``; one code path for both ``n > m`` and ``n == m``."""
    if m < 1 or n < m:
        raise ValueError(f"dG needs 1 <= m <= n, got m={m}, n={n}")
    p = p_of(m)
    diagonal_cell = n == m
    g: list[GElem] = []
    if diagonal_cell:
        # G^{m-1}_{m-1}.(3214)(Id + (2143))
        g += [GElem(m - 1, m - 1, P3214), GElem(m - 1, m - 1, P3214 * P2143)]
    else:
        g += [GElem(m, n - 1, ID4), GElem(m, n - 1, P2143)]
    g += [GElem(m - 2, n - 1, ID4), GElem(m - 2, n - 1, P4321)]
    tail = alpha(n - 1, n - 1 - p) + act(alpha(n - 1, p), P3214)
    return GMixedSum.make(g, tail)


def dG_elem(g: GElem) -> GMixedSum:
    return dG(g.m, g.n).act(g.sigma)


def d_mixed(s: GMixedSum) -> GMixedSum:
    out = GMixedSum(frozenset(), d_tree(s.tpart))
    for g in s.gpart:
        out = out + dG_elem(g)
    return out


def mutate_alpha(fault: tuple[int, int]):
    """Context helper for fault injection: a ``dG`` variant that drops one alpha term.

    ``fault = (m, n)`` selects the cell whose ``alpha_{n-1, p}.(3214)`` summand
    is removed.  Returns a replacement for :func:`dG` with the same signature.
    """

    def faulty(m: int, n: int) -> GMixedSum:
        base = dG(m, n)
        if (m, n) != fault:
            return base
        p = p_of(m)
        return GMixedSum(base.gpart, base.tpart + act(alpha(n - 1, p), P3214))

    return faulty


@dataclass(frozen=True)
class D2Result:
    m: int
    n: int
    ok: bool
    residual: str

    def record(self) -> dict:
        return {"check": "d2", "m": self.m, "n": self.n, "ok": self.ok, "residual": self.residual}


def check_one(m: int, n: int, dg=dG) -> D2Result:
    first = dg(m, n)
    out = GMixedSum(frozenset(), d_tree(first.tpart))
    for g in first.gpart:
        out = out + dg(g.m, g.n).act(g.sigma)
    return D2Result(m, n, out.is_zero(), "" if out.is_zero() else str(out))


def check_d2(max_n: int, dg=dG) -> list[D2Result]:
    """``d(d G^m_n) == 0`` for ``1 <= m <= n <= max_n``."""
    if max_n < 1:
        raise ValueError("max_n must be >= 1")
    return [check_one(m, n, dg) for n in range(1, max_n + 1) for m in range(1, n + 1)]
