"""Complete DFAs over indexed alphabets, minimality and bifix-freeness checks."""
from __future__ import annotations

import json
import random
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .errors import DimensionError, PreconditionError
from .transmap import Transformation

__all__ = [
    "Dfa",
    "BifixReport",
    "is_minimal",
    "is_bifix_free",
    "transition_semigroup",
    "normalize",
    "rename",
    "dfa_from_json",
    "dfa_to_json",
    "load_dfa",
    "save_dfa",
    "random_bifix_dfa",
]


@dataclass(frozen=True)
class Dfa:
    """A complete DFA with states ``0..n-1``; ``delta[a]`` is the map of letter ``a``."""

    n: int
    delta: tuple
    initial: int = 0
    finals: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "delta", tuple(
            d if isinstance(d, Transformation) else Transformation(d) for d in self.delta))
        object.__setattr__(self, "finals", frozenset(self.finals))
        if not 0 <= self.initial < self.n:
            raise DimensionError(f"initial state {self.initial} outside 0..{self.n - 1}")
        for f in self.finals:
            if not 0 <= f < self.n:
                raise DimensionError(f"final state {f} outside 0..{self.n - 1}")
        for a, d in enumerate(self.delta):
            if d.n != self.n:
                raise DimensionError(f"letter {a} acts on {d.n} states, expected {self.n}")

    @property
    def alphabet_size(self) -> int:
        return len(self.delta)

    def step(self, q: int, a: int) -> int:
        return self.delta[a].images[q]

    def run(self, word: Sequence[int], q: int | None = None) -> int:
        q = self.initial if q is None else q
        for a in word:
            q = self.delta[a].images[q]
        return q

    def accepts(self, word: Sequence[int]) -> bool:
        return self.run(word) in self.finals


@dataclass(frozen=True)
class BifixReport:
    is_prefix_free: bool
    is_suffix_free: bool
    lemma1_witnesses: dict = field(default_factory=dict)

    @property
    def is_bifix(self) -> bool:
        return self.is_prefix_free and self.is_suffix_free


def _reachable(d: Dfa) -> list:
    """BFS from the initial state; returns a shortest word for every reachable state."""
    words = {d.initial: ()}
    queue = deque([d.initial])
    while queue:
        q = queue.popleft()
        for a, row in enumerate(d.delta):
            r = row.images[q]
            if r not in words:
                words[r] = words[q] + (a,)
                queue.append(r)
    return words


def _equivalence_classes(d: Dfa) -> list:
    """Moore partition refinement; returns the class index of every state."""
    cls = [1 if q in d.finals else 0 for q in range(d.n)]
    while True:
        signature = {}
        new = []
        for q in range(d.n):
            sig = (cls[q], *(cls[row.images[q]] for row in d.delta))
            new.append(signature.setdefault(sig, len(signature)))
        if len(signature) == len(set(cls)):
            return new
        cls = new


def is_minimal(d: Dfa) -> bool:
    if len(_reachable(d)) != d.n:
        return False
    return len(set(_equivalence_classes(d))) == d.n


def _nonempty_path_to_final(d: Dfa, sources) -> tuple | None:
    """A nonempty word leading from one of ``sources`` to a final state, if any."""
    start = {}
    queue = deque()
    for s in sources:
        for a, row in enumerate(d.delta):
            r = row.images[s]
            if r not in start:
                start[r] = (s, (a,))
                queue.append(r)
    while queue:
        q = queue.popleft()
        if q in d.finals:
            return start[q]
        s, w = start[q]
        for a, row in enumerate(d.delta):
            r = row.images[q]
            if r not in start:
                start[r] = (s, w + (a,))
                queue.append(r)
    return None


def _suffix_witness(d: Dfa) -> tuple | None:
    """Search for ``u`` nonempty and ``v`` with ``v`` and ``uv`` both accepted.

    BFS over pairs ``(q, m)``: ``q`` is the state of ``d`` on the whole word
    read so far, ``m`` is ``"S"`` before any letter, ``"A"`` while still inside
    ``u``, or the state of ``d`` on the part of ``v`` read so far.
    """
    q0 = d.initial
    finals = d.finals

    def hit(q, m):
        if q not in finals:
            return False
        if m == "A":
            return q0 in finals  # v is the empty word
        return m != "S" and m in finals

    init = (q0, "S")
    parent = {init: None}
    queue = deque([init])
    while queue:
        node = queue.popleft()
        q, m = node
        for a, row in enumerate(d.delta):
            r = row.images[q]
            if m == "S":
                succ = ("A",)
            elif m == "A":
                succ = ("A", row.images[q0])
            else:
                succ = (row.images[m],)
            for m2 in succ:
                nxt = (r, m2)
                if nxt in parent:
                    continue
                parent[nxt] = (node, a)
                if hit(r, m2):
                    return _split_suffix_word(parent, nxt)
                queue.append(nxt)
    return None


def _split_suffix_word(parent, node) -> tuple:
    letters, modes = [], []
    while parent[node] is not None:
        prev, a = parent[node]
        letters.append(a)
        modes.append(node[1])
        node = prev
    letters.reverse()
    modes.reverse()
    cut = next((i for i, m in enumerate(modes) if m not in ("S", "A")), len(letters))
    return tuple(letters[:cut]), tuple(letters[cut:])


def is_bifix_free(d: Dfa) -> BifixReport:
    """Decide prefix- and suffix-freeness of the language of a minimal DFA.

    Prefix-freeness: no final state reaches a final state by a nonempty word.
    Suffix-freeness: ``L`` and ``Sigma^+ L`` are disjoint, checked by a BFS
    over the product automaton. The report also lists witnesses for the
    structural conditions every minimal bifix-free DFA satisfies (an empty
    state, a single final state with quotient ``{eps}``, and a path from the
    initial to the empty state in every letter-induced map).
    """
    if not is_minimal(d):
        raise PreconditionError("bifix-freeness is decided on minimal DFAs only")
    witnesses = {}

    bad = _nonempty_path_to_final(d, sorted(d.finals))
    prefix_free = bad is None
    if bad is not None:
        f, w = bad
        witnesses["prefix"] = {"final": f, "word": list(w)}

    sw = _suffix_witness(d)
    suffix_free = sw is None
    if sw is not None:
        witnesses["suffix"] = {"u": list(sw[0]), "v": list(sw[1])}

    empty = [q for q in range(d.n)
             if q not in d.finals and all(row.images[q] == q for row in d.delta)]
    if not empty:
        witnesses["empty_state"] = None
    if len(d.finals) != 1:
        witnesses["single_final"] = sorted(d.finals)
    else:
        (f,) = d.finals
        if empty and any(row.images[f] != empty[0] for row in d.delta):
            witnesses["single_final"] = f
    if empty:
        e = empty[0]
        for a, row in enumerate(d.delta):
            q = d.initial
            for _ in range(d.n):
                q = row.images[q]
            if q != e:
                witnesses["path_to_empty"] = a
                break
    return BifixReport(prefix_free, suffix_free, witnesses)


def transition_semigroup(d: Dfa):
    from .semigroups import close

    return close(d.delta, n=d.n)


def rename(d: Dfa, perm: Sequence[int]) -> Dfa:
    """Relabel state ``q`` as ``perm[q]``."""
    n = d.n
    inv = [0] * n
    for q, r in enumerate(perm):
        inv[r] = q
    delta = tuple(Transformation(perm[row.images[inv[r]]] for r in range(n)) for row in d.delta)
    return Dfa(n, delta, perm[d.initial], frozenset(perm[f] for f in d.finals))


def normalize(d: Dfa) -> Dfa:
    """Rename states so that 0 is initial, n-2 final and n-1 empty.

    Middle states keep their relative order. Raises if the DFA is not a
    minimal DFA of a bifix-free language.
    """
    report = is_bifix_free(d)
    if not report.is_bifix:
        raise PreconditionError("the language is not bifix-free")
    n = d.n
    if n < 3:
        raise PreconditionError("a bifix-free DFA with an empty and a final state has n >= 3")
    (f,) = d.finals
    empty = next(q for q in range(n)
                 if q not in d.finals and all(row.images[q] == q for row in d.delta))
    middle = [q for q in range(n) if q not in (d.initial, f, empty)]
    perm = [0] * n
    perm[d.initial] = 0
    perm[f] = n - 2
    perm[empty] = n - 1
    for i, q in enumerate(middle, start=1):
        perm[q] = i
    return rename(d, perm)


# -- JSON -----------------------------------------------------------------


def dfa_to_json(d: Dfa) -> dict:
    return {
        "n": d.n,
        "alphabet": d.alphabet_size,
        "delta": [list(row.images) for row in d.delta],
        "initial": d.initial,
        "finals": sorted(d.finals),
    }


def dfa_from_json(obj: dict) -> Dfa:
    try:
        n = int(obj["n"])
        delta = obj["delta"]
        alphabet = int(obj.get("alphabet", len(delta)))
        initial = int(obj["initial"])
        finals = frozenset(int(f) for f in obj["finals"])
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed DFA object: {exc!r}") from None
    if alphabet != len(delta):
        raise ValueError(f"alphabet={alphabet} but delta has {len(delta)} rows")
    return Dfa(n, tuple(Transformation(row) for row in delta), initial, finals)


def load_dfa(path) -> Dfa:
    return dfa_from_json(json.loads(Path(path).read_text()))


def save_dfa(path, d: Dfa) -> None:
    Path(path).write_text(json.dumps(dfa_to_json(d)) + "\n")


# -- sampling -------------------------------------------------------------


def _random_bbf_letter(n: int, rng: random.Random) -> Transformation:
    from .semigroups import in_bbf

    E, F = n - 1, n - 2
    while True:
        images = [rng.randrange(1, n) for _ in range(n - 2)] + [E, E]
        t = Transformation(images)
        if in_bbf(t):
            return t


def random_bifix_dfa(n: int, letters: int, rng: random.Random, max_tries: int = 10**6) -> Dfa:
    """Rejection-sample a minimal DFA of a bifix-free language.

    Letters are drawn independently from B_bf(n); a candidate is kept once it
    is minimal and both prefix- and suffix-free.
    """
    for _ in range(max_tries):
        delta = tuple(_random_bbf_letter(n, rng) for _ in range(letters))
        d = Dfa(n, delta, 0, frozenset({n - 2}))
        if not is_minimal(d):
            continue
        if is_bifix_free(d).is_bifix:
            return d
    raise RuntimeError(f"no minimal bifix-free DFA found in {max_tries} tries")
