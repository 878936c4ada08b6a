"""The extended Steenrod algebra B2 and its classical quotient A2.

Monomials are tuples of integer exponents read left to right, so
``(t, s)`` is ``Sq^t Sq^s``.  Negative exponents are allowed and ``Sq^0`` is
not the identity in B2.  Normal forms are sums of admissible monomials,
obtained by rewriting the leftmost inadmissible pair with the Adem relation.
"""

from __future__ import annotations

import re
from typing import Iterable

from .gf2 import binom_c

B2 = "b2"
A2 = "a2"
DEFAULT_FUEL = 10**6


class SqMonomial(tuple):
    __slots__ = ()

    def __new__(cls, exponents: Iterable[int] = ()):
        return super().__new__(cls, (int(e) for e in exponents))

    @property
    def degree(self) -> int:
        return sum(self)

    def __str__(self) -> str:
        return " ".join(f"Sq^{e}" for e in self) if self else "1"

    def __repr__(self) -> str:
        return f"SqMonomial({str(self)})"


def _mono_key(m: tuple) -> tuple:
    return (len(m), tuple(-e for e in m))


class SqPolynomial(frozenset):
    """F2-sum of monomials."""

    def __new__(cls, terms: Iterable[Iterable[int]] = ()):
        out: set[SqMonomial] = set()
        for t in terms:
            out ^= {SqMonomial(t)}
        return super().__new__(cls, out)

    def __add__(self, other: SqPolynomial) -> SqPolynomial:
        return frozenset.__new__(SqPolynomial, frozenset.__xor__(self, other))

    def __mul__(self, other: SqPolynomial) -> SqPolynomial:  # type: ignore[override]
        return SqPolynomial(SqMonomial(a + b) for a in self for b in other)

    @property
    def degrees(self) -> set[int]:
        return {m.degree for m in self}

    def sorted_terms(self) -> list[SqMonomial]:
        return sorted(self, key=_mono_key)

    def __str__(self) -> str:
        return " + ".join(str(m) for m in self.sorted_terms()) or "0"

    def __repr__(self) -> str:
        return f"SqPolynomial({str(self)})"


def mono(*exponents: int) -> SqPolynomial:
    return SqPolynomial([exponents])


# ---------------------------------------------------------------------------
# parsing

class SqSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


_TOKEN = re.compile(r"\s*(?:(?P<sq>Sq\s*\^\s*(?P<int>-?\d+))|(?P<plus>\+)|(?P<zero>0)(?![\d^]))")


def parse_sq(text: str) -> SqPolynomial:
    """Parse ``poly := mono ('+' mono)*``, ``mono := ('Sq^' int)+``.

    A lone ``0`` is accepted as the zero polynomial so rendered output
    round-trips.
    """
    if not text.strip():
        raise SqSyntaxError("empty input", 0)
    monos: list[list[int]] = []
    current: list[int] | None = None
    zero_seen = False
    pos = 0
    expect_term = True
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        match = _TOKEN.match(text, pos)
        if not match:
            stripped = len(text[pos:]) - len(text[pos:].lstrip())
            raise SqSyntaxError("expected 'Sq^<int>' or '+'", pos + stripped)
        if match.group("sq"):
            if current is None:
                current = []
            current.append(int(match.group("int")))
            expect_term = False
        elif match.group("zero"):
            if not expect_term or current is not None:
                raise SqSyntaxError("unexpected '0'", match.start("zero"))
            zero_seen = True
            expect_term = False
        else:
            if expect_term:
                raise SqSyntaxError("unexpected '+'", match.start("plus"))
            if current is not None:
                monos.append(current)
            current = None
            expect_term = True
        pos = match.end()
    if expect_term:
        raise SqSyntaxError("expression ends with '+'", len(text))
    if current is not None:
        monos.append(current)
    if zero_seen and not monos:
        return SqPolynomial()
    return SqPolynomial(monos)


# ---------------------------------------------------------------------------
# Adem rewriting

def is_admissible(m: Iterable[int]) -> bool:
    m = tuple(m)
    return all(m[j] >= 2 * m[j + 1] for j in range(len(m) - 1))


def adem_range(t: int, s: int) -> range:
    """Indices ``i`` with possibly nonzero coefficient in ``Sq^t Sq^s``."""
    return range(t - s + 1, t // 2 + 1)


def adem_step(t: int, s: int) -> SqPolynomial:
    """``Sq^t Sq^s = sum_i C(s-i-1, t-2i) Sq^(s+t-i) Sq^i`` for ``t < 2s``."""
    if t >= 2 * s:
        raise ValueError(f"Sq^{t} Sq^{s} is already admissible")
    return SqPolynomial((s + t - i, i) for i in adem_range(t, s) if binom_c(s - i - 1, t - 2 * i))


class FuelExhausted(RuntimeError):
    pass


def _first_inadmissible(m: tuple) -> int:
    for j in range(len(m) - 1):
        if m[j] < 2 * m[j + 1]:
            return j
    return -1


_NF_CACHE: dict[tuple, frozenset] = {}


def _normal_mono(m: tuple, budget: list[int]) -> frozenset:
    """B2 normal form of one monomial; each Adem rewrite spends one unit of ``budget``."""
    cached = _NF_CACHE.get(m)
    if cached is not None:
        return cached
    j = _first_inadmissible(m)
    if j < 0:
        result = frozenset({m})
    else:
        budget[0] -= 1
        if budget[0] < 0:
            raise FuelExhausted("Adem rewriting ran out of fuel")
        out: set[tuple] = set()
        for pair in adem_step(m[j], m[j + 1]):
            out ^= _normal_mono(m[:j] + tuple(pair) + m[j + 2:], budget)
        result = frozenset(out)
    if len(_NF_CACHE) < 500_000:
        _NF_CACHE[m] = result
    return result


def _drop_zeros(m: tuple) -> tuple:
    return tuple(e for e in m if e != 0)


def normal_form(p: SqPolynomial, mode: str = B2, fuel: int = DEFAULT_FUEL) -> SqPolynomial:
    """Admissible normal form; in A2 mode ``Sq^0`` is the identity.

    In the quotient by ``Sq^0 + 1`` every negative square vanishes (for
    instance ``Sq^0 Sq^2 = Sq^3 Sq^-1 + Sq^2 Sq^0`` forces ``Sq^3 Sq^-1 = 0``),
    so A2 mode discards monomials that acquire a negative exponent.

    Raises :class:`FuelExhausted` when more than ``fuel`` rewrites are needed.
    """
    mode = mode.lower()
    if mode not in (B2, A2):
        raise ValueError(f"unknown mode {mode!r}")
    if mode == A2 and any(e < 0 for m in p for e in m):
        raise ValueError("negative exponents are not allowed in A2")
    budget = [fuel]
    pending = {tuple(m) for m in p}
    out: set[tuple] = set()
    while pending:
        nxt: set[tuple] = set()
        for m in pending:
            if mode == A2:
                m = _drop_zeros(m)
            for t in _normal_mono(m, budget):
                if mode == A2 and any(e < 0 for e in t):
                    continue
                if mode == A2 and 0 in t:
                    # dropping Sq^0 may break admissibility
                    nxt ^= {t}
                else:
                    out ^= {t}
        pending = nxt
    return SqPolynomial(out)


def acts_trivially(m: Iterable[int], degree: int) -> bool:
    """Whether instability alone forces ``m`` to kill every class of ``degree``.

    Factors are applied right to left; ``Sq^k`` kills a class of degree below ``k``.
    """
    current = degree
    for k in reversed(tuple(m)):
        if k > current:
            return True
        current += k
    return False
