"""Transformations of a finite state set and queries on their functional digraphs.

A transformation of ``Q = {0, ..., n-1}`` is stored as a dense tuple of images.
Composition reads left to right: ``s * t`` (or ``compose(s, t)``) applies ``s``
first and then ``t``, so ``q(st) = (qs)t``.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionError, DomainError

__all__ = [
    "Transformation",
    "OrbitDecomposition",
    "identity",
    "compose",
    "semiconstant",
    "assign",
    "analyze",
    "in_degree",
    "in_degrees",
    "distance",
    "tree_of",
    "cycle_states",
    "fixed_points",
    "to_array",
    "from_array",
    "encode",
    "decode",
    "write_transformations",
    "read_transformations",
    "format_transformations",
    "parse_transformations",
]


class Transformation:
    """A total self-map of ``{0, ..., n-1}``, compared by value."""

    __slots__ = ("images",)

    def __init__(self, images: Iterable[int]):
        images = tuple(int(x) for x in images)
        n = len(images)
        if n < 1:
            raise DimensionError("a transformation needs at least one state")
        for q, x in enumerate(images):
            if not 0 <= x < n:
                raise DimensionError(f"image {x} of state {q} is outside 0..{n - 1}")
        object.__setattr__(self, "images", images)

    def __setattr__(self, name, value):
        raise AttributeError("Transformation is immutable")

    @property
    def n(self) -> int:
        return len(self.images)

    @property
    def key(self) -> bytes:
        """Canonical byte encoding: ``n`` followed by the images."""
        return bytes((self.n, *self.images))

    def __call__(self, q: int) -> int:
        return self.images[q]

    def __getitem__(self, q: int) -> int:
        return self.images[q]

    def __len__(self) -> int:
        return len(self.images)

    def __iter__(self):
        return iter(self.images)

    def __mul__(self, other: "Transformation") -> "Transformation":
        return compose(self, other)

    def __pow__(self, k: int) -> "Transformation":
        if k < 0:
            raise DomainError("negative powers are undefined")
        result = identity(self.n)
        for _ in range(k):
            result = compose(result, self)
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, Transformation):
            return NotImplemented
        return self.images == other.images

    def __lt__(self, other: "Transformation") -> bool:
        return self.key < other.key

    def __hash__(self) -> int:
        return hash(self.images)

    def __repr__(self) -> str:
        return f"Transformation({list(self.images)})"

    def image(self) -> frozenset:
        return frozenset(self.images)


@dataclass(frozen=True)
class OrbitDecomposition:
    """Weakly connected components of a functional digraph.

    ``orbit_id[q]`` is the index of the orbit containing ``q``. ``cores[i]`` is
    the cycle of orbit ``i`` (listed from its smallest state, following the
    map) or a one-element tuple holding its fixed point.
    """

    orbit_id: tuple
    cores: tuple

    @property
    def orbits(self) -> list:
        out = [set() for _ in self.cores]
        for q, i in enumerate(self.orbit_id):
            out[i].add(q)
        return [frozenset(o) for o in out]

    def is_cycle(self, i: int) -> bool:
        return len(self.cores[i]) >= 2


def identity(n: int) -> Transformation:
    return Transformation(range(n))


def compose(s: Transformation, t: Transformation) -> Transformation:
    """Return ``st``: apply ``s`` first, then ``t``."""
    if s.n != t.n:
        raise DimensionError(f"cannot compose transformations of {s.n} and {t.n} states")
    ti = t.images
    return Transformation(ti[x] for x in s.images)


def semiconstant(S: Iterable[int], q: int, n: int) -> Transformation:
    """The transformation ``(S -> q)``: states of ``S`` go to ``q``, the rest are fixed."""
    S = set(S)
    for x in S | {q}:
        if not 0 <= x < n:
            raise DimensionError(f"state {x} is outside 0..{n - 1}")
    return Transformation(q if p in S else p for p in range(n))


def assign(n: int, mapping: dict) -> Transformation:
    """Identity on ``n`` states except for the given ``{state: image}`` assignments.

    This is how the simultaneous notation ``(0 -> n-1)(i -> n-2)(n-2 -> n-1)``
    is read: all listed assignments hold at once, everything else is fixed.
    """
    images = list(range(n))
    for p, q in mapping.items():
        if not (0 <= p < n and 0 <= q < n):
            raise DimensionError(f"assignment {p}->{q} is outside 0..{n - 1}")
        images[p] = q
    return Transformation(images)


def _check_state(t: Transformation, q: int) -> None:
    if not 0 <= q < t.n:
        raise DimensionError(f"state {q} is outside 0..{t.n - 1}")


def cycle_states(t: Transformation) -> set:
    """States lying on a cycle of length at least 2."""
    img = t.images
    n = len(img)
    # after n steps every walk sits on its periodic part, and every periodic
    # state is hit this way (cycles are closed under preimage within the cycle)
    periodic = set()
    for q in range(n):
        x = q
        for _ in range(n):
            x = img[x]
        periodic.add(x)
    return {q for q in periodic if img[q] != q}


def fixed_points(t: Transformation) -> list:
    return [q for q, x in enumerate(t.images) if x == q]


def in_degrees(t: Transformation) -> list:
    deg = [0] * t.n
    for x in t.images:
        deg[x] += 1
    return deg


def in_degree(t: Transformation, q: int) -> int:
    _check_state(t, q)
    return sum(1 for x in t.images if x == q)


def distance(t: Transformation, p: int, q: int):
    """Smallest ``i >= 0`` with ``p t^i = q``, or ``None`` when ``q`` is unreachable."""
    _check_state(t, p)
    _check_state(t, q)
    x = p
    for i in range(t.n):
        if x == q:
            return i
        x = t.images[x]
    return None


def tree_of(t: Transformation, q: int) -> frozenset:
    """All states with a path to ``q`` (including ``q``). ``q`` must not lie on a cycle."""
    _check_state(t, q)
    if q in cycle_states(t):
        raise DomainError(f"state {q} lies on a cycle; its tree is undefined")
    preimages = [[] for _ in range(t.n)]
    for p, x in enumerate(t.images):
        if p != x:
            preimages[x].append(p)
    seen = {q}
    stack = [q]
    while stack:
        x = stack.pop()
        for p in preimages[x]:
            if p not in seen:
                seen.add(p)
                stack.append(p)
    return frozenset(seen)


def analyze(t: Transformation) -> OrbitDecomposition:
    img = t.images
    n = len(img)
    # union-find over the edges q -> qt
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for q, x in enumerate(img):
        a, b = find(q), find(x)
        if a != b:
            parent[max(a, b)] = min(a, b)
    roots = sorted({find(q) for q in range(n)})
    index = {r: i for i, r in enumerate(roots)}
    orbit_id = tuple(index[find(q)] for q in range(n))

    cores = [None] * len(roots)
    for q in range(n):
        x = q
        for _ in range(n):
            x = img[x]
        i = orbit_id[x]
        if cores[i] is not None:
            continue
        cyc = [x]
        y = img[x]
        while y != x:
            cyc.append(y)
            y = img[y]
        start = cyc.index(min(cyc))
        cores[i] = tuple(cyc[start:] + cyc[:start])
    return OrbitDecomposition(orbit_id=orbit_id, cores=tuple(cores))


# -- bulk numeric helpers -------------------------------------------------


def to_array(ts: Sequence[Transformation], n: int | None = None) -> np.ndarray:
    if not ts:
        return np.zeros((0, n or 0), dtype=np.int64)
    return np.array([t.images for t in ts], dtype=np.int64)


def from_array(arr: np.ndarray) -> list:
    return [Transformation(row) for row in np.asarray(arr).tolist()]


def _weights(n: int) -> np.ndarray:
    return n ** np.arange(n - 1, -1, -1, dtype=np.int64)


def encode(arr: np.ndarray, n: int) -> np.ndarray:
    """Integer codes of rows of images; code order equals canonical key order."""
    arr = np.asarray(arr, dtype=np.int64)
    return arr @ _weights(n)


def decode(codes: np.ndarray, n: int) -> np.ndarray:
    codes = np.array(codes, dtype=np.int64, copy=True)
    out = np.empty((codes.shape[0], n), dtype=np.int64)
    for q in range(n - 1, -1, -1):
        out[:, q] = codes % n
        codes //= n
    return out


# -- line format ----------------------------------------------------------


def format_transformations(ts: Iterable[Transformation], n: int) -> str:
    lines = [f"n={n}"]
    for t in ts:
        if t.n != n:
            raise DimensionError(f"transformation of {t.n} states in a set declared n={n}")
        lines.append(" ".join(str(x) for x in t.images))
    return "\n".join(lines) + "\n"


def parse_transformations(text: str) -> tuple:
    """Parse the line format; returns ``(n, [Transformation, ...])``."""
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines or not lines[0].startswith("n="):
        raise ValueError("line format must start with 'n=<int>'")
    n = int(lines[0][2:])
    out = []
    for lineno, ln in enumerate(lines[1:], start=2):
        images = [int(x) for x in ln.split()]
        if len(images) != n:
            raise DimensionError(f"line {lineno}: expected {n} images, got {len(images)}")
        out.append(Transformation(images))
    return n, out


def write_transformations(path, ts: Iterable[Transformation], n: int) -> None:
    Path(path).write_text(format_transformations(ts, n))


def read_transformations(path) -> tuple:
    return parse_transformations(Path(path).read_text())
