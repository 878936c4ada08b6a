"""Finite cochain models over F2 with explicit cup-i structure maps.

A :class:`CupAlgebra` is a finite graded vector space with a basis, a
differential of degree +1 and bilinear maps ``e_i`` of degree ``-i``.
Elements are int bitsets over the basis.  The only structural requirement is
the coboundary identity

    d e_i(u, v) + e_i(du, v) + e_i(u, dv) = e_{i-1}(u, v) + e_{i-1}(v, u)

(with zero on the right for ``i = 0``), which is what makes the model an
algebra over the free operad on the bar resolution.

Models come from ordered simplicial complexes (interval-cut cup-i products),
from explicit tables, or as tensor products through the bar diagonal.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from functools import cached_property
from importlib import resources
from itertools import combinations, product
from pathlib import Path
from typing import Iterable, Iterator, NamedTuple, Sequence

from .bar import psi
from .gf2 import GF2Matrix, Quotient, binom_may, quotient_basis, support
from .report import CheckResult
from .tree4 import P3214, Tree2Sum, act, alpha

# ---------------------------------------------------------------------------
# simplicial complexes


class ComplexFormatError(ValueError):
    pass


@dataclass(frozen=True)
class SimplicialComplex:
    vertex_count: int
    facets: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if self.vertex_count < 0:
            raise ComplexFormatError("vertex count must be non-negative")
        for f in self.facets:
            if not f:
                raise ComplexFormatError("empty facet")
            if any(v < 0 or v >= self.vertex_count for v in f):
                raise ComplexFormatError(f"facet {list(f)} has a vertex out of range")
            if any(f[k] >= f[k + 1] for k in range(len(f) - 1)):
                raise ComplexFormatError(f"facet {list(f)} is not strictly increasing")

    @cached_property
    def simplices(self) -> list[tuple[int, ...]]:
        """All faces of the facets, sorted by dimension then lexicographically."""
        faces: set[tuple[int, ...]] = set()
        for f in self.facets:
            for k in range(1, len(f) + 1):
                faces.update(combinations(f, k))
        return sorted(faces, key=lambda s: (len(s), s))

    @property
    def dimension(self) -> int:
        return max((len(f) - 1 for f in self.facets), default=-1)


def parse_simplicial(doc: dict) -> SimplicialComplex:
    try:
        n = int(doc["vertices"])
        facets = tuple(tuple(int(v) for v in f) for f in doc["facets"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ComplexFormatError(f"malformed simplicial complex: {exc}") from exc
    return SimplicialComplex(n, facets)


def load_complex(path: str | Path) -> SimplicialComplex:
    doc = _read_json(Path(path))
    if doc.get("type") != "simplicial":
        raise ComplexFormatError(f"{path}: expected type 'simplicial'")
    return parse_simplicial(doc)


# ---------------------------------------------------------------------------
# cup algebras


class CupIndexError(IndexError):
    """An ``e_i`` beyond the model's ``i_max`` was requested in a live degree."""


@dataclass
class CupAlgebra:
    names: list[str]
    degrees: list[int]
    d: list[int]
    tables: dict[int, dict[tuple[int, int], int]]
    i_max: int
    label: str = ""
    index: dict[str, int] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        self.index = {name: j for j, name in enumerate(self.names)}
        if len(self.index) != len(self.names):
            raise ComplexFormatError("duplicate basis names")
        for j, image in enumerate(self.d):
            for k in support(image):
                if self.degrees[k] != self.degrees[j] + 1:
                    raise ComplexFormatError(f"d({self.names[j]}) has wrong degree")

    # -- basis bookkeeping --------------------------------------------------

    @property
    def size(self) -> int:
        return len(self.names)

    @cached_property
    def by_degree(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {}
        for j, deg in enumerate(self.degrees):
            out.setdefault(deg, []).append(j)
        return out

    @property
    def top_degree(self) -> int:
        return max(self.degrees, default=0)

    def basis(self, degree: int) -> list[int]:
        return self.by_degree.get(degree, [])

    def dim(self, degree: int) -> int:
        return len(self.basis(degree))

    def element(self, *names: str) -> int:
        v = 0
        for name in names:
            v ^= 1 << self.index[name]
        return v

    def degree_of(self, v: int) -> int | None:
        """Degree of a nonzero homogeneous element; ``None`` for zero."""
        if not v:
            return None
        degs = {self.degrees[j] for j in support(v)}
        if len(degs) != 1:
            raise ValueError("element is not homogeneous")
        return degs.pop()

    def render(self, v: int) -> str:
        return " + ".join(self.names[j] for j in support(v)) or "0"

    @property
    def is_graded(self) -> bool:
        """True when the differential vanishes."""
        return not any(self.d)

    # -- structure maps -----------------------------------------------------

    def dvec(self, v: int) -> int:
        out = 0
        for j in support(v):
            out ^= self.d[j]
        return out

    def e(self, i: int, u: int, v: int) -> int:
        """``e_i(u, v)`` for homogeneous ``u`` and ``v``."""
        if not u or not v or i < 0:
            return 0
        target = self.degree_of(u) + self.degree_of(v) - i
        if target < 0 or target > self.top_degree:
            return 0
        if i > self.i_max:
            raise CupIndexError(f"e_{i} requested but the model stops at i_max={self.i_max}")
        table = self.tables.get(i)
        if not table:
            return 0
        out = 0
        vs = support(v)
        for a in support(u):
            for b in vs:
                val = table.get((a, b))
                if val:
                    out ^= val
        return out

    def with_entry(self, i: int, a: str, b: str, value: int) -> CupAlgebra:
        """Copy of the model with the single structure constant ``e_i(a, b)`` replaced."""
        tables = {k: dict(t) for k, t in self.tables.items()}
        tables.setdefault(i, {})[(self.index[a], self.index[b])] = value
        return CupAlgebra(list(self.names), list(self.degrees), list(self.d), tables,
                          max(self.i_max, i), label=f"{self.label}*")

    def random_element(self, degree: int, rng: random.Random) -> int:
        v = 0
        for j in self.basis(degree):
            if rng.random() < 0.5:
                v |= 1 << j
        return v

    def d_matrix(self, degree: int) -> GF2Matrix:
        """Matrix of ``d: A^degree -> A^(degree+1)`` in the ordered bases."""
        src = self.basis(degree)
        dst = self.basis(degree + 1)
        pos = {j: r for r, j in enumerate(dst)}
        columns = []
        for j in src:
            col = 0
            for k in support(self.d[j]):
                col |= 1 << pos[k]
            columns.append(col)
        return GF2Matrix.from_columns(columns, len(dst))

    def local(self, degree: int, v: int) -> int:
        """Coordinates of ``v`` in the degree-``degree`` basis."""
        out = 0
        for r, j in enumerate(self.basis(degree)):
            if (v >> j) & 1:
                out |= 1 << r
        return out

    def globalize(self, degree: int, coords: int) -> int:
        basis = self.basis(degree)
        out = 0
        for r in support(coords):
            out |= 1 << basis[r]
        return out


# ---------------------------------------------------------------------------
# constructors


def _interval_cut_faces(n: int, i: int) -> Iterator[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Position sets of the two faces in the interval-cut formula for ``u cup_i v``.

    Cuts ``0 <= j_0 < ... < j_i <= n`` split ``[0, n]`` into overlapping
    intervals; even-numbered intervals go to ``u`` and odd ones to ``v``.
    """
    for cuts in combinations(range(n + 1), i + 1):
        bounds = (0,) + cuts + (n,)
        left: list[int] = []
        right: list[int] = []
        for k in range(i + 2):
            piece = range(bounds[k], bounds[k + 1] + 1)
            (left if k % 2 == 0 else right).extend(piece)
        yield tuple(left), tuple(right)


def cochain_algebra(K: SimplicialComplex, i_max: int | None = None, label: str = "") -> CupAlgebra:
    """Normalized simplicial cochains with Alexander-Whitney cup and interval-cut cup-i."""
    simplices = K.simplices
    top = K.dimension
    if i_max is None:
        i_max = 2 * max(top, 0)
    if i_max < 0:
        raise ValueError("i_max must be >= 0")
    index = {s: j for j, s in enumerate(simplices)}
    names = ["s" + "_".join(str(v) for v in s) for s in simplices]
    degrees = [len(s) - 1 for s in simplices]
    d = [0] * len(simplices)
    # coboundary of the dual cochain of a face: sum of cofaces
    for s, j in index.items():
        for k in range(len(s)):
            face = s[:k] + s[k + 1:]
            if face:
                d[index[face]] ^= 1 << j
    tables: dict[int, dict[tuple[int, int], int]] = {}
    for i in range(i_max + 1):
        table: dict[tuple[int, int], int] = {}
        for rho, r in index.items():
            n = len(rho) - 1
            if i > n:
                continue
            for lpos, rpos in _interval_cut_faces(n, i):
                a = index[tuple(rho[p] for p in lpos)]
                b = index[tuple(rho[p] for p in rpos)]
                table[(a, b)] = table.get((a, b), 0) ^ (1 << r)
        tables[i] = {k: v for k, v in table.items() if v}
    return CupAlgebra(names, degrees, d, tables, i_max, label=label)


def _table_algebra(basis: Sequence[tuple[str, int]], d: dict[str, Iterable[str]],
                   entries: Iterable[tuple[int, str, str, Iterable[str]]],
                   i_max: int | None = None, label: str = "") -> CupAlgebra:
    names = [b[0] for b in basis]
    degrees = [int(b[1]) for b in basis]
    index = {name: j for j, name in enumerate(names)}
    dl = [0] * len(names)
    for src, dsts in d.items():
        for dst in dsts:
            dl[index[src]] ^= 1 << index[dst]
    tables: dict[int, dict[tuple[int, int], int]] = {}
    top_i = 0
    for i, a, b, value in entries:
        v = 0
        for name in value:
            v ^= 1 << index[name]
        tables.setdefault(i, {})[(index[a], index[b])] = v
        top_i = max(top_i, i)
    if i_max is None:
        i_max = max(top_i, 2 * max(degrees, default=0))
    return CupAlgebra(names, degrees, dl, tables, i_max, label=label)


def point_algebra() -> CupAlgebra:
    """F2 in degree 0 with ``e_0(1, 1) = 1`` and every higher ``e_i`` zero."""
    return _table_algebra([("1", 0)], {}, [(0, "1", "1", ["1"])], label="point")


def circle_algebra(unit: str = "1", gen: str = "a") -> CupAlgebra:
    """The two-dimensional circle model: ``e_0(1,1) = 1``, ``e_1(a,a) = a``, 1 a strict unit for ``e_0``."""
    entries = [
        (0, unit, unit, [unit]),
        (0, unit, gen, [gen]),
        (0, gen, unit, [gen]),
        (1, gen, gen, [gen]),
    ]
    return _table_algebra([(unit, 0), (gen, 1)], {}, entries, label="S1")


def tensor_algebra(A: CupAlgebra, B: CupAlgebra, names: Sequence[str] | None = None,
                   label: str = "") -> CupAlgebra:
    """Tensor product; ``e_i`` acts through the diagonal ``psi(e_i) = sum_j e_j (x) e_{i-j}.(21)^j``."""
    pairs = [(a, b) for a in range(A.size) for b in range(B.size)]
    pos = {p: k for k, p in enumerate(pairs)}
    if names is None:
        names = [f"{A.names[a]}|{B.names[b]}" for a, b in pairs]
    degrees = [A.degrees[a] + B.degrees[b] for a, b in pairs]

    def tensor(u: int, v: int) -> int:
        out = 0
        vs = support(v)
        for a in support(u):
            for b in vs:
                out |= 1 << pos[(a, b)]
        return out

    d = []
    for a, b in pairs:
        d.append(tensor(A.d[a], 1 << b) ^ tensor(1 << a, B.d[b]))
    top = max(degrees, default=0)
    i_max = 2 * top
    tables: dict[int, dict[tuple[int, int], int]] = {}
    for i in range(i_max + 1):
        table: dict[tuple[int, int], int] = {}
        terms = psi(i)
        for (a, b), (a2, b2) in product(pairs, pairs):
            if degrees[pos[(a, b)]] + degrees[pos[(a2, b2)]] - i < 0:
                continue
            val = 0
            for left, right in terms:
                x = A.e(left.index, 1 << a, 1 << a2)
                if not x:
                    continue
                if right.twist:
                    y = B.e(right.index, 1 << b2, 1 << b)
                else:
                    y = B.e(right.index, 1 << b, 1 << b2)
                if y:
                    val ^= tensor(x, y)
            if val:
                table[(pos[(a, b)], pos[(a2, b2)])] = val
        tables[i] = table
    return CupAlgebra(list(names), degrees, d, tables, i_max, label=label)


def torus_algebra() -> CupAlgebra:
    return tensor_algebra(circle_algebra("1", "a"), circle_algebra("1", "b"),
                          names=["1", "beta", "alpha", "alphabeta"], label="T2")


# ---------------------------------------------------------------------------
# file formats


def _read_json(path: Path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ComplexFormatError(f"{path}: not valid JSON ({exc})") from exc
    if not isinstance(doc, dict) or "type" not in doc:
        raise ComplexFormatError(f"{path}: missing 'type'")
    return doc


BUNDLED = ("point", "s1", "torus", "s2", "rp2")


def resolve_model_path(ref: str | Path) -> Path:
    """A file path, or the name of a bundled model (``torus``, ``rp2.json``, ...)."""
    path = Path(ref)
    if path.exists():
        return path
    stem = path.name[:-5] if path.name.endswith(".json") else path.name
    if stem in BUNDLED:
        return Path(str(resources.files("ademcartan") / "data" / f"{stem}.json"))
    raise FileNotFoundError(f"no such complex file or bundled model: {ref}")


def model_from_dict(doc: dict, base: Path | None = None, label: str = "") -> CupAlgebra:
    kind = doc.get("type")
    if kind == "simplicial":
        return cochain_algebra(parse_simplicial(doc), doc.get("i_max"), label=label)
    if kind == "cup_algebra":
        try:
            basis = [(b["name"], int(b["degree"])) for b in doc["basis"]]
            d = {src: dsts for src, dsts in doc.get("d", [])}
            entries = [(int(x["i"]), x["args"][0], x["args"][1], x["value"]) for x in doc.get("e", [])]
            return _table_algebra(basis, d, entries, doc.get("i_max"), label=label)
        except (KeyError, TypeError, ValueError, IndexError) as exc:
            raise ComplexFormatError(f"malformed cup_algebra: {exc}") from exc
    if kind == "tensor":
        factors = doc.get("factors")
        if not isinstance(factors, list) or len(factors) != 2:
            raise ComplexFormatError("tensor needs exactly two factors")
        base = base or Path(".")
        loaded = []
        for f in factors:
            fp = Path(f)
            if not fp.is_absolute() and (base / fp).exists():
                fp = base / fp
            loaded.append(load_model(fp))
        return tensor_algebra(loaded[0], loaded[1], doc.get("names"), label=label)
    raise ComplexFormatError(f"unknown model type {kind!r}")


def load_model(ref: str | Path) -> CupAlgebra:
    path = resolve_model_path(ref)
    doc = _read_json(path)
    return model_from_dict(doc, path.parent, label=path.stem)


# ---------------------------------------------------------------------------
# evaluation of trees


def eval_tree(s: Tree2Sum, A: CupAlgebra, args: Sequence[int]) -> int:
    """Evaluate a formal sum of trees on four homogeneous elements.

    A term ``e_x(e_a, e_b).sigma`` reads its inputs through ``sigma``: slot
    ``j`` receives ``args[sigma^{-1}(j)]``.
    """
    if len(args) != 4:
        raise ValueError("arity-4 trees take four arguments")
    out = 0
    cache: dict[tuple, int] = {}
    for t in s:
        inv = t.sigma.inverse()
        w = [args[inv(j) - 1] for j in range(1, 5)]
        key_l = (t.a, w[0], w[1])
        left = cache.get(key_l)
        if left is None:
            left = cache[key_l] = A.e(t.a, w[0], w[1])
        key_r = (t.b, w[2], w[3])
        right = cache.get(key_r)
        if right is None:
            right = cache[key_r] = A.e(t.b, w[2], w[3])
        out ^= A.e(t.x, left, right)
    return out


# ---------------------------------------------------------------------------
# cohomology


class Cls(NamedTuple):
    """A cohomology class: degree plus coordinates in the chosen class basis."""

    degree: int
    coords: int


@dataclass
class CohomologyModel:
    algebra: CupAlgebra
    quotients: dict[int, Quotient]

    def dim(self, degree: int) -> int:
        q = self.quotients.get(degree)
        return q.dim if q else 0

    def dims(self) -> tuple[int, ...]:
        top = self.algebra.top_degree
        return tuple(self.dim(k) for k in range(0, top + 1))

    def rep(self, h: Cls) -> int:
        q = self.quotients.get(h.degree)
        if q is None:
            if h.coords:
                raise ValueError("no classes in that degree")
            return 0
        return q.lift(h.coords)

    def is_cocycle(self, v: int) -> bool:
        return self.algebra.dvec(v) == 0

    def project(self, degree: int, cocycle: int) -> Cls:
        if self.algebra.dvec(cocycle):
            raise ValueError("not a cocycle")
        q = self.quotients.get(degree)
        if q is None:
            if cocycle and self.algebra.degree_of(cocycle) != degree:
                raise ValueError("degree mismatch")
            return Cls(degree, 0)
        return Cls(degree, q.project(cocycle))

    def is_coboundary(self, v: int) -> bool:
        deg = self.algebra.degree_of(v)
        return v == 0 or self.project(deg, v).coords == 0

    def basis(self, degree: int) -> list[Cls]:
        return [Cls(degree, 1 << k) for k in range(self.dim(degree))]

    def classes(self, degree: int, exhaustive_limit: int = 6) -> list[Cls]:
        """Every class of the degree when the dimension is small, else a basis."""
        n = self.dim(degree)
        if n <= exhaustive_limit:
            return [Cls(degree, c) for c in range(1 << n)]
        return [Cls(degree, 0)] + self.basis(degree)

    def class_names(self, degree: int) -> list[str]:
        q = self.quotients.get(degree)
        if q is None:
            return []
        return [f"[{self.algebra.render(r)}]" for r in q.representatives]

    def render(self, h: Cls) -> str:
        names = self.class_names(h.degree)
        return " + ".join(names[k] for k in support(h.coords)) or "0"


def cohomology(A: CupAlgebra) -> CohomologyModel:
    quotients: dict[int, Quotient] = {}
    for k in sorted(A.by_degree):
        cocycles = [A.globalize(k, v) for v in A.d_matrix(k).kernel()]
        boundaries = [A.d[j] for j in A.basis(k - 1) if A.d[j]]
        quotients[k] = quotient_basis(cocycles, boundaries)
    return CohomologyModel(A, quotients)


def sq(A: CupAlgebra, H: CohomologyModel, h: Cls, r: int) -> Cls:
    """``Sq^r h`` computed as ``e_{|h|-r}(c, c)`` on the stored representative."""
    target = h.degree + r
    j = h.degree - r
    if j < 0 or h.coords == 0:
        return Cls(target, 0)
    c = H.rep(h)
    y = A.e(j, c, c)
    if A.dvec(y):
        raise ArithmeticError(f"e_{j}(c, c) is not a cocycle; the cup-i structure is broken")
    return H.project(target, y)


def D(A: CupAlgebra, H: CohomologyModel, h: Cls, j: int) -> Cls:
    """``D_j h = e_j(h, h) = Sq^{|h|-j} h``."""
    return sq(A, H, h, h.degree - j)


def product_class(A: CupAlgebra, H: CohomologyModel, x: Cls, y: Cls) -> Cls:
    z = A.e(0, H.rep(x), H.rep(y))
    return H.project(x.degree + y.degree, z)


def add_cls(x: Cls, y: Cls) -> Cls:
    if x.degree != y.degree:
        if not x.coords:
            return y
        if not y.coords:
            return x
        raise ValueError("adding classes of different degrees")
    return Cls(x.degree, x.coords ^ y.coords)


# ---------------------------------------------------------------------------
# identities


def coboundary_defect(A: CupAlgebra, i: int, u: int, v: int) -> int:
    """Left minus right side of the arity-2 coboundary identity (zero when it holds)."""
    lhs = A.dvec(A.e(i, u, v)) ^ A.e(i, A.dvec(u), v) ^ A.e(i, u, A.dvec(v))
    rhs = A.e(i - 1, u, v) ^ A.e(i - 1, v, u) if i >= 1 else 0
    return lhs ^ rhs


def check_coboundary_identity(A: CupAlgebra, samples: int, rng: random.Random) -> list[CheckResult]:
    degrees = sorted(A.by_degree)
    results = []
    for _ in range(samples):
        p, q = rng.choice(degrees), rng.choice(degrees)
        u, v = A.random_element(p, rng), A.random_element(q, rng)
        for i in range(0, A.i_max + 1):
            bad = coboundary_defect(A, i, u, v)
            if bad:
                results.append(CheckResult("coboundary", {"i": i, "u": A.render(u), "v": A.render(v)},
                                           False, A.render(bad)))
    if not results:
        results.append(CheckResult("coboundary", {"model": A.label, "samples": samples}, True))
    return results


def adem_side(w: int, v: int) -> list[tuple[int, int]]:
    """Pairs ``(x, h)`` of ``sum_l (l, w-2l) D_{v-w+2l} D_{w-l}``."""
    out = []
    for l in range(0, w // 2 + 1):
        if binom_may(l, w - 2 * l):
            x, h = v - w + 2 * l, w - l
            if x >= 0 and h >= 0:
                out.append((x, h))
    return out


def eval_dd(A: CupAlgebra, H: CohomologyModel, h: Cls, pairs: Iterable[tuple[int, int]],
            n: int) -> Cls:
    """``sum D_x D_k (h)`` over ``pairs``; every term has degree ``4|h| - n``."""
    total = Cls(4 * h.degree - n, 0)
    for x, k in pairs:
        total = add_cls(total, D(A, H, D(A, H, h, k), x))
    return total


def verify_relations(A: CupAlgebra, H: CohomologyModel | None = None,
                     max_index: int | None = None) -> list[CheckResult]:
    """Cartan, Adem, instability, squaring and level relations on all classes."""
    H = H or cohomology(A)
    top = A.top_degree
    if max_index is None:
        max_index = 2 * top + 1
    degrees = [k for k in range(0, top + 1) if H.dim(k)]
    classes = {k: H.classes(k) for k in degrees}
    results: list[CheckResult] = []

    def note(check: str, ok: bool, detail: str = "", **params) -> None:
        if not ok:
            results.append(CheckResult(check, {"model": A.label, **params}, False, detail))

    counts = dict.fromkeys(["instability", "squaring", "commutativity", "level", "cartan",
                            "cartan_chain", "adem"], 0)
    for k, hs in classes.items():
        for h in hs:
            for r in range(k + 1, k + 4):
                counts["instability"] += 1
                note("instability", sq(A, H, h, r).coords == 0, h=H.render(h), r=r)
            counts["squaring"] += 1
            note("squaring", sq(A, H, h, k) == product_class(A, H, h, h), h=H.render(h))
    basis = [h for k in degrees for h in H.basis(k)]
    for x, y in product(basis, basis):
        counts["commutativity"] += 1
        note("commutativity", product_class(A, H, x, y) == product_class(A, H, y, x),
             x=H.render(x), y=H.render(y))
    for a, b, c, e4 in product(basis, repeat=4):
        if a.degree + b.degree + c.degree + e4.degree > top:
            continue
        lhs = product_class(A, H, product_class(A, H, a, b), product_class(A, H, c, e4))
        rhs = product_class(A, H, product_class(A, H, a, c), product_class(A, H, b, e4))
        counts["level"] += 1
        note("level", lhs == rhs, a=H.render(a), b=H.render(b), c=H.render(c), d=H.render(e4))
    all_classes = [h for k in degrees for h in classes[k]]
    for x, y in product(all_classes, all_classes):
        xy = product_class(A, H, x, y)
        for n in range(0, max_index + 1):
            lhs = D(A, H, xy, n)
            rhs = Cls(lhs.degree, 0)
            for kk in range(0, n + 1):
                rhs = add_cls(rhs, product_class(A, H, D(A, H, x, kk), D(A, H, y, n - kk)))
            counts["cartan"] += 1
            note("cartan", lhs == rhs, x=H.render(x), y=H.render(y), n=n)
            counts["cartan_chain"] += 1
            ok, detail = _cartan_chain(A, H, x, y, n)
            note("cartan_chain", ok, detail, x=H.render(x), y=H.render(y), n=n)
    for h in all_classes:
        for total in range(0, 2 * max_index + 1):
            for w in range(0, total + 1):
                v = total - w
                if w > v:
                    continue
                lhs = eval_dd(A, H, h, adem_side(w, v), total)
                rhs = eval_dd(A, H, h, adem_side(v, w), total)
                counts["adem"] += 1
                note("adem", lhs == rhs, h=H.render(h), w=w, v=v)
    if not results:
        for check, n in counts.items():
            results.append(CheckResult(check, {"model": A.label, "instances": n}, True))
    return results


def cartan_tree(n: int) -> Tree2Sum:
    """``alpha_{n,n} + alpha_{n,0}.(3214)``, the tree tail of ``dG^1_{n+1}``."""
    return alpha(n, n) + act(alpha(n, 0), P3214)


def _cartan_chain(A: CupAlgebra, H: CohomologyModel, x: Cls, y: Cls, n: int) -> tuple[bool, str]:
    cx, cy = H.rep(x), H.rep(y)
    if not cx or not cy:
        return True, ""
    value = eval_tree(cartan_tree(n), A, (cx, cx, cy, cy))
    expected = A.e(n, A.e(0, cx, cy), A.e(0, cx, cy))
    for l in range(0, n + 1):
        expected ^= A.e(0, A.e(l, cx, cx), A.e(n - l, cy, cy))
    diff = value ^ expected
    if A.dvec(value) or A.dvec(expected):
        return False, "not a cocycle"
    if diff and not H.is_coboundary(diff):
        return False, A.render(diff)
    return True, ""


def apply_squares(A: CupAlgebra, H: CohomologyModel, h: Cls, poly) -> Cls:
    """Apply a sum of Steenrod monomials to a class; factors act right to left."""
    total = Cls(h.degree + next(iter(poly)).degree, 0) if poly else Cls(h.degree, 0)
    for mono in poly:
        cur = h
        for r in reversed(tuple(mono)):
            cur = sq(A, H, cur, r)
        total = add_cls(total, cur)
    return total
