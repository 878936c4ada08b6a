"""Verification sweeps shared by the command line and the acceptance tests."""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, Sequence, TypeVar

from . import gcells, tree4
from .cochains import BUNDLED, check_coboundary_identity, cohomology, load_model, verify_relations
from .gf2 import binom_may, doubling_holds, lemma51_failures, pascal_holds
from .report import CheckResult

T = TypeVar("T")


def _pmap(fn: Callable[[T], list[CheckResult]], items: Sequence[T], jobs: int) -> list[CheckResult]:
    """Map in order; ``jobs > 1`` fans out to worker processes without changing the order."""
    if jobs <= 1 or len(items) <= 1:
        chunks = [fn(item) for item in items]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(fn, items))
    return [r for chunk in chunks for r in chunk]


# -- operad identities ------------------------------------------------------

def identities(max_m: int = 12, max_n: int = 16, max_x: int = 6) -> list[CheckResult]:
    return list(tree4.check_identities(max_m, max_n, max_x))


def _d2_one(mn: tuple[int, int]) -> list[CheckResult]:
    res = gcells.check_one(*mn)
    return [CheckResult("d2", {"m": res.m, "n": res.n}, res.ok, res.residual)]


def d2(max_n: int = 12, jobs: int = 1) -> list[CheckResult]:
    if max_n < 1:
        raise ValueError("max_n must be >= 1")
    cells = [(m, n) for n in range(1, max_n + 1) for m in range(1, n + 1)]
    return _pmap(_d2_one, cells, jobs)


def diagonal(max_m: int = 8, max_n: int = 16, max_x: int = 4, max_adem: int = 24) -> list[CheckResult]:
    return list(tree4.check_diagonal(max_m, max_n, max_x, max_adem))


# -- binomial identities ----------------------------------------------------

def _lemma51_exhaustive(p: int) -> list[CheckResult]:
    bad = lemma51_failures(p)
    return [CheckResult("lemma51", {"p": p, "mode": "exhaustive"}, not bad,
                        "" if not bad else f"{len(bad)} failures, first {bad[0]}")]


def _lemma51_sampled(p: int, samples: int, rng: random.Random) -> CheckResult:
    N = 1 << p
    bad = []
    for _ in range(samples):
        i, j = rng.randrange(N), rng.randrange(N)
        c = binom_may(i, j)
        if (i + j >= N and c) or c != binom_may(N - i - j - 1, j):
            bad.append((i, j))
    return CheckResult("lemma51", {"p": p, "mode": f"sampled{samples}"}, not bad,
                       "" if not bad else f"first failure {bad[0]}")


def lemma51(max_p: int = 8, sampled: Iterable[int] = (9, 10), samples: int = 20000,
            bound: int = 256, seed: int = 0, jobs: int = 1) -> list[CheckResult]:
    """Block rules for ``(i, j)``, plus the Pascal-type and doubling identities on a box."""
    rng = random.Random(seed)
    out = _pmap(_lemma51_exhaustive, list(range(0, max_p + 1)), jobs)
    out += [_lemma51_sampled(p, samples, rng) for p in sampled]
    box = range(-bound, bound + 1)
    pascal_bad = [(x, y) for x in box for y in box if not pascal_holds(x, y)]
    out.append(CheckResult("pascal", {"bound": bound}, not pascal_bad,
                           "" if not pascal_bad else f"fails at {pascal_bad}"))
    double_bad = [(l, p) for l in box for p in box if not doubling_holds(l, p)]
    out.append(CheckResult("double", {"bound": bound}, not double_bad,
                           "" if not double_bad else f"fails at {double_bad[:5]}"))
    return out


# -- cochain models ---------------------------------------------------------

def _relations_one(args: tuple[str, int, int]) -> list[CheckResult]:
    ref, samples, seed = args
    A = load_model(ref)
    out = check_coboundary_identity(A, samples, random.Random(seed))
    out += verify_relations(A, cohomology(A))
    return out


def relations(models: Sequence[str] = BUNDLED, samples: int = 1000, seed: int = 0,
              jobs: int = 1) -> list[CheckResult]:
    return _pmap(_relations_one, [(str(m), samples, seed) for m in models], jobs)
