"""Closure under composition and the canonical semigroups of bifix-free languages.

State conventions throughout: ``0`` is initial, ``n-2`` final, ``n-1`` empty,
and the middle states are ``Q_M = {1, ..., n-3}``.
"""
from __future__ import annotations

import hashlib
import itertools
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionError, PreconditionError, ResourceGuardError
from .transmap import (
    Transformation,
    assign,
    decode,
    encode,
    format_transformations,
    from_array,
    parse_transformations,
    to_array,
)

__all__ = [
    "Semigroup",
    "PairStatus",
    "close",
    "in_bbf",
    "in_wge6",
    "in_wle5",
    "wge6_size",
    "bbf_mask",
    "enumerate_bbf",
    "enumerate_wge6",
    "enumerate_wle5",
    "wge6_types",
    "witness_letters",
    "witness_dfa",
    "witness_alphabet_size",
    "pair_statuses",
    "irreducible_elements",
    "redundant_generators",
    "middle_pairs",
]

MAX_N = 8
# element count at which products are computed in slabs
_SLAB = 1 << 22


@dataclass(frozen=True)
class Semigroup:
    """An ordered, deduplicated set of transformations of ``n`` states.

    Results of :func:`close` and of the W-enumerations are closed under
    composition; :func:`enumerate_bbf` returns an unclosed set of the same type.
    ``generators`` records which elements were supplied as generators.
    """

    n: int
    elements: tuple
    generators: tuple = ()
    _index: dict = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_index", {t: i for i, t in enumerate(self.elements)})

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, t) -> bool:
        return t in self._index

    def __eq__(self, other) -> bool:
        if not isinstance(other, Semigroup):
            return NotImplemented
        return self.n == other.n and set(self.elements) == set(other.elements)

    def __hash__(self):
        return hash((self.n, frozenset(self.elements)))

    def index(self, t: Transformation) -> int:
        return self._index[t]

    def as_set(self) -> frozenset:
        return frozenset(self.elements)

    def array(self) -> np.ndarray:
        return to_array(self.elements, self.n)

    def codes(self) -> np.ndarray:
        return encode(self.array(), self.n)

    def is_closed(self) -> bool:
        if not self.elements:
            return True
        own = np.sort(self.codes())
        for prod in _product_codes(self.array(), self.array(), self.n):
            if not np.isin(prod, own, assume_unique=False).all():
                return False
        return True


def _product_codes(left: np.ndarray, right: np.ndarray, n: int):
    """Yield code arrays of all products ``l * r`` (apply ``l`` then ``r``), in slabs."""
    if len(left) == 0 or len(right) == 0:
        return
    step = max(1, _SLAB // max(1, len(right) * n))
    idx = np.arange(len(right))[:, None, None]
    for lo in range(0, len(left), step):
        block = left[lo:lo + step]
        prod = right[idx, block[None, :, :]]  # [r, l, q] = right[r][block[l][q]]
        yield encode(prod.reshape(-1, n), n)


def close(gens: Iterable[Transformation], n: int | None = None) -> Semigroup:
    """Least composition-closed set containing ``gens``.

    Elements come out breadth-first by word length: the generators in the
    order given, then each new layer in canonical key order. Only right
    multiplication by generators is needed, since every product
    ``g1 g2 ... gk`` extends a shorter one on the right.
    """
    seen_gens = []
    for g in gens:
        if g not in seen_gens:
            seen_gens.append(g)
    if not seen_gens:
        return Semigroup(n=n or 0, elements=(), generators=())
    n = seen_gens[0].n
    if any(g.n != n for g in seen_gens):
        raise DimensionError("generators act on different numbers of states")

    G = to_array(seen_gens, n)
    layer = encode(G, n)
    order = [layer]
    known = np.sort(layer)
    while len(layer):
        fresh = []
        for codes in _product_codes(decode(layer, n), G, n):
            fresh.append(np.unique(codes))
        new = np.unique(np.concatenate(fresh))
        new = new[~np.isin(new, known, assume_unique=True)]
        if len(new):
            order.append(new)
            known = np.union1d(known, new)
        layer = new
    elements = from_array(decode(np.concatenate(order), n))
    return Semigroup(n=n, elements=tuple(elements), generators=tuple(seen_gens))


# -- membership -----------------------------------------------------------


def in_bbf(t: Transformation) -> bool:
    """Membership in the necessary-condition set B_bf(n).

    The chain condition quantifies over all ``j >= 1``. Checking ``j <= n`` is
    enough: once ``0t^j`` and ``qt^j`` meet they stay equal, and two walks in a
    functional digraph that ever meet do so within ``n - 1`` steps.
    """
    n = t.n
    if n < 2:
        raise DimensionError("B_bf is defined for n >= 2")
    img = t.images
    E, F = n - 1, n - 2
    if img[E] != E or img[F] != E or 0 in img:
        return False
    cur = list(img)
    for _ in range(n):
        z = cur[0]
        if z != E:
            for q in range(1, E):
                if cur[q] == z:
                    return False
        cur = [img[x] for x in cur]
    return True


def in_wge6(t: Transformation) -> bool:
    n = t.n
    if n < 3 or not in_bbf(t):
        return False
    p = t.images[0]
    if p >= n - 2:
        return True
    return all(t.images[q] >= n - 2 for q in range(1, n - 2))


def in_wle5(t: Transformation) -> bool:
    n = t.n
    if n < 3 or not in_bbf(t):
        return False
    mids = [t.images[q] for q in range(1, n - 2) if t.images[q] != n - 1]
    return len(mids) == len(set(mids))


def wge6_size(n: int) -> int:
    return (n - 1) ** (n - 3) + (n - 2) ** (n - 3) + (n - 3) * 2 ** (n - 3)


def witness_alphabet_size(n: int) -> int:
    return (n - 2) ** (n - 3) + (n - 3) * 2 ** (n - 3) - 1


def middle_pairs(n: int) -> list:
    return list(itertools.combinations(range(1, n - 2), 2))


# -- enumeration ----------------------------------------------------------


def _guard(n: int, allow_large: bool, lo: int = 2) -> None:
    if n < lo:
        raise DimensionError(f"n must be at least {lo}")
    if n > MAX_N:
        raise ResourceGuardError(f"n={n} exceeds the hard limit {MAX_N}")
    if n == MAX_N and not allow_large:
        raise ResourceGuardError(f"n={n} scans {n ** n} maps; pass allow_large=True")


def bbf_mask(A: np.ndarray, n: int) -> np.ndarray:
    """Vectorized :func:`in_bbf` over the rows of an image array."""
    E, F = n - 1, n - 2
    mask = (A != 0).all(axis=1) & (A[:, E] == E) & (A[:, F] == E)
    cur = A.copy()
    for _ in range(n):
        z = cur[:, 0]
        clash = (cur[:, 1:E] == z[:, None]).any(axis=1) & (z != E)
        mask &= ~clash
        cur = np.take_along_axis(A, cur, axis=1)
    return mask


def _all_maps(n: int, first: int | None = None) -> np.ndarray:
    """All self-maps of ``n`` states in code order, optionally with fixed ``0t``."""
    if first is None:
        codes = np.arange(n ** n, dtype=np.int64)
    else:
        block = n ** (n - 1)
        codes = np.arange(first * block, (first + 1) * block, dtype=np.int64)
    return decode(codes, n).astype(np.int8)


def _cache_path(cache_dir, name: str, n: int, text: str) -> Path:
    digest = hashlib.sha256(text.encode()).hexdigest()[:16]
    return Path(cache_dir) / f"{name}-n{n}-{digest}.txt"


def _cache_load(cache_dir, name: str, n: int):
    cache_dir = cache_dir or os.environ.get("BIFIX_CACHE_DIR")
    if not cache_dir:
        return None
    for path in sorted(Path(cache_dir).glob(f"{name}-n{n}-*.txt")):
        text = path.read_text()
        if _cache_path(cache_dir, name, n, text) == path:
            return parse_transformations(text)[1]
    return None


def _cache_store(cache_dir, name: str, n: int, elements) -> None:
    cache_dir = cache_dir or os.environ.get("BIFIX_CACHE_DIR")
    if not cache_dir:
        return
    Path(cache_dir).mkdir(parents=True, exist_ok=True)
    text = format_transformations(elements, n)
    _cache_path(cache_dir, name, n, text).write_text(text)


def enumerate_bbf(n: int, allow_large: bool = False, cache_dir=None) -> Semigroup:
    """All of B_bf(n) in canonical key order. Not closed under composition."""
    _guard(n, allow_large)
    cached = _cache_load(cache_dir, "bbf", n)
    if cached is not None:
        return Semigroup(n=n, elements=tuple(cached))
    rows = []
    # 0 is never an image, so 0t ranges over 1..n-1
    for first in range(1, n):
        A = _all_maps(n, first)
        rows.append(A[bbf_mask(A, n)])
    elements = tuple(from_array(np.concatenate(rows)))
    _cache_store(cache_dir, "bbf", n, elements)
    return Semigroup(n=n, elements=elements)


def wge6_types(n: int) -> dict:
    """The three kinds of elements of W>=6_bf(n), keyed 1, 2, 3, each in key order."""
    if n < 3:
        raise DimensionError("W>=6_bf(n) is defined for n >= 3")
    E, F = n - 1, n - 2
    m = n - 3
    out = {1: [], 2: [], 3: []}
    for mid in itertools.product(range(1, n), repeat=m):
        out[1].append(Transformation((E, *mid, E, E)))
    for mid in itertools.product([q for q in range(1, n) if q != F], repeat=m):
        out[2].append(Transformation((F, *mid, E, E)))
    for q in range(1, n - 2):
        for mid in itertools.product((F, E), repeat=m):
            out[3].append(Transformation((q, *mid, E, E)))
    return out


def enumerate_wge6(n: int) -> Semigroup:
    types = wge6_types(n)
    elements = sorted(types[1] + types[2] + types[3], key=lambda t: t.key)
    return Semigroup(n=n, elements=tuple(elements))


def enumerate_wle5(n: int, allow_large: bool = False, cache_dir=None) -> Semigroup:
    _guard(n, allow_large, lo=3)
    cached = _cache_load(cache_dir, "wle5", n)
    if cached is not None:
        return Semigroup(n=n, elements=tuple(cached))
    bbf = enumerate_bbf(n, allow_large=allow_large, cache_dir=cache_dir)
    A = bbf.array()
    E = n - 1
    ok = np.ones(len(A), dtype=bool)
    for a, b in itertools.combinations(range(1, n - 2), 2):
        ok &= ((A[:, a] == E) & (A[:, b] == E)) | (A[:, a] != A[:, b])
    elements = tuple(t for t, keep in zip(bbf.elements, ok) if keep)
    _cache_store(cache_dir, "wle5", n, elements)
    return Semigroup(n=n, elements=elements)


# -- the witness ----------------------------------------------------------


def witness_letters(n: int) -> list:
    """Letter transformations of the witness DFA W(n), in alphabet order.

    b-letters by ascending i, then c-letters in key order, then d-letters
    grouped by the image of 0 (ascending), each group in key order.
    """
    if n < 4:
        raise PreconditionError("the witness DFA is defined for n >= 4")
    E, F = n - 1, n - 2
    mids = range(1, n - 2)
    types = wge6_types(n)
    b = [assign(n, {0: E, i: F, F: E}) for i in mids]
    c_skip = assign(n, {0: F, **{q: E for q in mids}, F: E})
    c = [t for t in types[2] if t != c_skip]
    d = []
    for q in mids:
        skip = assign(n, {0: q, **{r: E for r in mids}, F: E})
        d.extend(t for t in types[3] if t.images[0] == q and t != skip)
    return b + c + d


def witness_dfa(n: int):
    from .automata import Dfa

    letters = witness_letters(n)
    return Dfa(n=n, delta=tuple(letters), initial=0, finals=frozenset({n - 2}))


# -- analysis -------------------------------------------------------------


@dataclass(frozen=True)
class PairStatus:
    """Collision and focus witnesses for one unordered pair of middle states.

    ``colliding_witness`` is some ``t`` with ``0t`` in the pair and ``rt`` the
    other state for a middle ``r``; ``focused_witness`` is ``(u, r)`` with
    ``u`` sending both states to ``r``, a middle or the final state.
    """

    pair: tuple
    colliding_witness: Transformation | None = None
    focused_witness: tuple | None = None

    @property
    def colliding(self) -> bool:
        return self.colliding_witness is not None

    @property
    def focused(self) -> bool:
        return self.focused_witness is not None


def pair_statuses(T: Semigroup | Sequence[Transformation]) -> list:
    elements = list(T)
    if not elements:
        raise PreconditionError("pair census needs a nonempty set")
    n = elements[0].n
    if n < 4:
        raise PreconditionError("pair census needs n >= 4")
    lo, hi = 1, n - 3
    pairs = middle_pairs(n)
    coll, foc = {}, {}
    for t in elements:
        img = t.images
        a = img[0]
        if lo <= a <= hi:
            for r in range(lo, hi + 1):
                b = img[r]
                if lo <= b <= hi and b != a:
                    coll.setdefault((min(a, b), max(a, b)), t)
        for p, q in pairs:
            if img[p] == img[q] and lo <= img[p] <= n - 2:
                foc.setdefault((p, q), (t, img[p]))
    return [PairStatus(pr, coll.get(pr), foc.get(pr)) for pr in pairs]


def irreducible_elements(T: Semigroup) -> set:
    """Elements of a closed set that are not a product of two of its members."""
    if not len(T):
        return set()
    n = T.n
    A = T.array()
    own = np.sort(T.codes())
    produced = []
    for codes in _product_codes(A, A, n):
        codes = np.unique(codes)
        if not np.isin(codes, own).all():
            raise PreconditionError("input set is not closed under composition")
        produced.append(codes)
    produced = np.unique(np.concatenate(produced))
    keep = ~np.isin(T.codes(), produced)
    return {t for t, k in zip(T.elements, keep) if k}


def redundant_generators(gens: Sequence[Transformation]) -> list:
    """Generators that lie in the semigroup generated by the others.

    Only generators that are products inside the closure are candidates; the
    rest are indispensable and skipped without a closure run.
    """
    gens = list(dict.fromkeys(gens))
    if not gens:
        return []
    T = close(gens)
    irreducible = irreducible_elements(T)
    out = []
    for g in gens:
        if g in irreducible:
            continue
        if g in close([h for h in gens if h != g], n=T.n):
            out.append(g)
    return out
