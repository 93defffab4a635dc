"""Conflicts between candidate transformations and the pruning that proves uniqueness for n <= 7.

Two members of B_bf(n) conflict when the semigroup they generate cannot sit
inside a transition semigroup that beats the known maxima. A pruning round
keeps ``t`` only if ``1 + |B'| - |M|`` still reaches the threshold. Here
``B'`` is the set of non-conflicting partners of ``t``, and ``M`` is a
greedy maximal matching of the conflicts inside ``B'``.
"""
from __future__ import annotations

import hashlib
import json
import os
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path

import numba as nb
import numpy as np

from .errors import DimensionError, PreconditionError, ResourceGuardError
from .semigroups import enumerate_bbf, enumerate_wge6, enumerate_wle5, in_bbf, middle_pairs
from .transmap import Transformation

__all__ = [
    "REASONS",
    "ConflictVerdict",
    "PruneTrace",
    "conflict",
    "greedy_matching",
    "maximal_matching",
    "conflict_table",
    "prune",
]

REASONS = ("escapes-B_bf", "focuses-colliding-pair", "forces-all-pairs")
MAX_PRUNE_N = 7


@dataclass(frozen=True)
class ConflictVerdict:
    """Outcome of :func:`conflict`.

    ``witness`` is ``(element, pair)`` for the first two reasons: the element
    that leaves B_bf (``pair`` is ``None``), or the element focusing a
    colliding pair. For ``forces-all-pairs`` it is the pair census
    ``(colliding_pairs, focused_pairs)``.
    """

    conflicting: bool
    reason: str | None = None
    witness: object = None


# -- the predicate, pure Python ------------------------------------------


def _pair_masks(img, pairs, n):
    lo, hi = 1, n - 3
    a = img[0]
    col = set()
    if lo <= a <= hi:
        for r in range(lo, hi + 1):
            b = img[r]
            if lo <= b <= hi and b != a:
                col.add((min(a, b), max(a, b)))
    foc = {pr for pr in pairs if img[pr[0]] == img[pr[1]] and lo <= img[pr[0]] <= n - 2}
    return col, foc


def conflict(t1: Transformation, t2: Transformation, *, per_pair: bool = False) -> ConflictVerdict:
    """Decide whether ``t1`` and ``t2`` conflict, by closing ``{t1, t2}``.

    The closure is abandoned as soon as an element leaves B_bf(n) or a pair of
    middle states is found both colliding and focused. With the full closure
    in hand, the pair is also conflicting when it makes every pair colliding,
    or every pair focused. Then the semigroup is bounded by W<=5_bf(n) or by
    W>=6_bf(n). ``per_pair=True`` replaces that last test with the weaker
    "each pair is colliding or focused".
    """
    if t1.n != t2.n:
        raise DimensionError("transformations act on different numbers of states")
    n = t1.n
    if n < 3:
        raise PreconditionError("conflicts are defined for n >= 3")
    for t in (t1, t2):
        if not in_bbf(t):
            raise PreconditionError(f"{t!r} is not in B_bf({n})")
    pairs = middle_pairs(n)
    # canonical generator order makes the verdict, reason included, symmetric
    gens = [t1] if t1 == t2 else sorted((t1, t2), key=lambda t: t.key)
    seen = set()
    queue = deque()
    col_by, foc_by = {}, {}

    def admit(t):
        if t in seen:
            return None
        if not in_bbf(t):
            return ConflictVerdict(True, REASONS[0], (t, None))
        seen.add(t)
        queue.append(t)
        col, foc = _pair_masks(t.images, pairs, n)
        for pr in col:
            col_by.setdefault(pr, t)
            if pr in foc_by:
                return ConflictVerdict(True, REASONS[1], (foc_by[pr], pr))
        for pr in foc:
            foc_by.setdefault(pr, t)
            if pr in col_by:
                return ConflictVerdict(True, REASONS[1], (t, pr))
        return None

    for g in gens:
        v = admit(g)
        if v:
            return v
    while queue:
        e = queue.popleft()
        for g in gens:
            v = admit(e * g)
            if v:
                return v
    all_pairs = set(pairs)
    census = (tuple(sorted(col_by)), tuple(sorted(foc_by)))
    if per_pair:
        forced = set(col_by) | set(foc_by) == all_pairs
    else:
        forced = set(col_by) == all_pairs or set(foc_by) == all_pairs
    if forced:
        return ConflictVerdict(True, REASONS[2], census)
    return ConflictVerdict(False)


# -- matching -------------------------------------------------------------


def _sort_key(v):
    return v.key if isinstance(v, Transformation) else v


def maximal_matching(vertices, edges) -> list:
    """Greedy maximal matching: scan edges lexicographically, keep those with two free ends."""
    vs = set(vertices)
    norm = []
    for e in edges:
        a, b = tuple(e)
        if a == b:
            raise ValueError(f"self-loop at {a!r}")
        if a not in vs or b not in vs:
            raise ValueError(f"edge {e!r} leaves the vertex set")
        if _sort_key(b) < _sort_key(a):
            a, b = b, a
        norm.append((a, b))
    norm = sorted(set(norm), key=lambda e: (_sort_key(e[0]), _sort_key(e[1])))
    used = set()
    out = []
    for a, b in norm:
        if a not in used and b not in used:
            used.update((a, b))
            out.append((a, b))
    return out


def greedy_matching(vertices, edges) -> int:
    return len(maximal_matching(vertices, edges))


# -- bulk kernels ---------------------------------------------------------


def _multiplication_table(B: np.ndarray, n: int) -> np.ndarray:
    """``MT[i, j]`` is the index of ``B[i] B[j]`` (``B[i]`` first), or -1 outside ``B``."""
    N = len(B)
    pw = n ** np.arange(n - 1, -1, -1, dtype=np.int64)
    index = np.full(n ** n, -1, dtype=np.int64)
    index[B @ pw] = np.arange(N)
    MT = np.empty((N, N), dtype=np.int32)
    for i in range(N):
        MT[i] = index[B[:, B[i]] @ pw]
    return MT


def _masks(B: np.ndarray, n: int):
    pairs = middle_pairs(n)
    col = np.zeros(len(B), dtype=np.int64)
    foc = np.zeros(len(B), dtype=np.int64)
    bit = {pr: 1 << i for i, pr in enumerate(pairs)}
    for i, img in enumerate(B.tolist()):
        c, f = _pair_masks(img, pairs, n)
        for pr in c:
            col[i] |= bit[pr]
        for pr in f:
            foc[i] |= bit[pr]
    return col, foc, (1 << len(pairs)) - 1


@nb.njit(cache=True)
def _table_kernel(MT, col, foc, full, per_pair):
    N = MT.shape[0]
    C = np.zeros((N, N), np.uint8)
    stamp = np.zeros(N, np.int64)
    queue = np.empty(N, np.int64)
    tick = 0
    gens = np.empty(2, np.int64)
    for i in range(N):
        for j in range(i, N):
            tick += 1
            gens[0] = i
            gens[1] = j
            ng = 1 if i == j else 2
            head = 0
            tail = 0
            c = 0
            f = 0
            res = 0
            for gi in range(ng):
                g = gens[gi]
                stamp[g] = tick
                queue[tail] = g
                tail += 1
                c |= col[g]
                f |= foc[g]
            if c & f:
                res = 2
            while res == 0 and head < tail:
                e = queue[head]
                head += 1
                for gi in range(ng):
                    pr = MT[e, gens[gi]]
                    if pr < 0:
                        res = 1
                        break
                    if stamp[pr] != tick:
                        stamp[pr] = tick
                        queue[tail] = pr
                        tail += 1
                        c |= col[pr]
                        f |= foc[pr]
                        if c & f:
                            res = 2
                            break
            if res == 0:
                if per_pair:
                    if (c | f) == full:
                        res = 3
                elif c == full or f == full:
                    res = 3
            C[i, j] = res
            C[j, i] = res
    return C


@nb.njit(cache=True)
def _round_kernel(conf, alive, threshold):
    N = conf.shape[0]
    keep = alive.copy()
    stats = np.zeros((N, 3), np.int64)
    matched = np.zeros(N, np.bool_)
    for t in range(N):
        if not alive[t]:
            continue
        matched[:] = False
        cnt = 0
        for u in range(N):
            if alive[u] and u != t and not conf[t, u]:
                cnt += 1
        m = 0
        # lexicographic edge scan over B': first free partner v > u
        for u in range(N):
            if not alive[u] or u == t or conf[t, u] or matched[u]:
                continue
            for v in range(u + 1, N):
                if alive[v] and v != t and not conf[t, v] and not matched[v] and conf[u, v]:
                    matched[u] = True
                    matched[v] = True
                    m += 1
                    break
        stats[t, 0] = cnt
        stats[t, 1] = m
        stats[t, 2] = 1 + cnt - m
        if 1 + cnt - m < threshold:
            keep[t] = False
    return keep, stats


def _table_cache_path(cache_dir, n, per_pair, codes):
    digest = hashlib.sha256(codes.tobytes()).hexdigest()[:16]
    mode = "perpair" if per_pair else "sound"
    return Path(cache_dir) / f"conflicts-{mode}-n{n}-{digest}.npy"


def conflict_table(n: int, *, per_pair: bool = False, cache_dir=None):
    """``(B_bf(n), C)`` with ``C[i, j]`` the reason code of the pair (0 = compatible).

    Codes 1, 2, 3 index :data:`REASONS`. The diagonal holds ``conflict(t, t)``.
    """
    _guard(n)
    B = enumerate_bbf(n, cache_dir=cache_dir)
    A = B.array()
    cache_dir = cache_dir or os.environ.get("BIFIX_CACHE_DIR")
    path = _table_cache_path(cache_dir, n, per_pair, B.codes()) if cache_dir else None
    if path is not None and path.exists():
        return B, np.load(path)
    MT = _multiplication_table(A, n)
    col, foc, full = _masks(A, n)
    C = _table_kernel(MT, col, foc, full, per_pair)
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        np.save(path, C)
    return B, C


def _guard(n):
    if n < 3:
        raise DimensionError("pruning needs n >= 3")
    if n > MAX_PRUNE_N:
        raise ResourceGuardError(f"pruning is limited to n <= {MAX_PRUNE_N}, got n={n}")


# -- pruning --------------------------------------------------------------


@dataclass(frozen=True)
class PruneTrace:
    """Sizes ``|B_0|, |B_1|, ...`` and the per-element bounds of every round.

    ``iterations[i]`` lists ``(t, |B'|, |M|, 1 + |B'| - |M|)`` for each
    ``t`` in ``B_i``. ``reasons`` counts unordered distinct pairs of ``B_0``
    by conflict reason, with ``"none"`` for compatible pairs.
    """

    n: int
    threshold: int
    sizes: tuple
    failed: bool
    per_pair: bool = False
    iterations: tuple = field(default=(), repr=False)
    reasons: dict = field(default_factory=dict)

    def as_dict(self, with_iterations: bool = False) -> dict:
        out = {"n": self.n, "threshold": self.threshold, "sizes": list(self.sizes),
               "failed": self.failed}
        if with_iterations:
            out["iterations"] = [
                [[list(t.images), b, m, bound] for t, b, m, bound in rnd]
                for rnd in self.iterations
            ]
        return out

    def to_json(self, with_iterations: bool = False) -> str:
        return json.dumps(self.as_dict(with_iterations))


def prune(n: int, *, per_pair: bool = False, cache_dir=None) -> PruneTrace:
    """Run the pruning rounds from ``B_0 = B_bf(n)`` until empty or stuck."""
    _guard(n)
    B, C = conflict_table(n, per_pair=per_pair, cache_dir=cache_dir)
    threshold = max(len(enumerate_wle5(n, cache_dir=cache_dir)), len(enumerate_wge6(n)))
    conf = C > 0
    iu = np.triu_indices(len(B), 1)
    hist = np.bincount(C[iu], minlength=4)
    reasons = {"none": int(hist[0]), **{r: int(hist[i + 1]) for i, r in enumerate(REASONS)}}

    alive = np.ones(len(B), dtype=np.bool_)
    sizes = [len(B)]
    rounds = []
    failed = False
    while alive.any():
        keep, stats = _round_kernel(conf, alive, threshold)
        rounds.append(tuple(
            (B.elements[i], int(stats[i, 0]), int(stats[i, 1]), int(stats[i, 2]))
            for i in np.flatnonzero(alive)
        ))
        if keep.sum() == alive.sum():
            failed = True
            break
        alive = keep
        sizes.append(int(alive.sum()))
    return PruneTrace(n=n, threshold=threshold, sizes=tuple(sizes), failed=failed,
                      per_pair=per_pair, iterations=tuple(rounds), reasons=reasons)
