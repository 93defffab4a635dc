"""The injective map phi from a bifix-free transition semigroup into W>=6_bf(n).

:func:`classify` walks the case tree in its printed order, with each case
taken only when none of the earlier ones applies, and records the symbols
the case defines. :func:`phi` builds the image ``s`` from that record.
Wherever a case leaves a state unmentioned, ``qs = qt``.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field

from .errors import PreconditionError
from .semigroups import in_bbf, in_wge6, pair_statuses, wge6_size
from .transmap import Transformation, cycle_states, in_degrees

__all__ = [
    "LABELS",
    "CaseLabel",
    "CaseContext",
    "AuditReport",
    "SmallNWarning",
    "classify",
    "phi",
    "changed_middle_states",
    "sentinel",
    "audit_injectivity",
]

LABELS = (
    "1",
    "2.1", "2.2", "2.3", "2.4.1", "2.4.2", "2.4.3", "2.4.4", "2.4.5", "2.5.1", "2.5.2",
    "3.1", "3.2.1", "3.2.2", "3.2.3", "3.2.4", "3.3", "3.4.1", "3.4.2", "3.4.3",
    "3.5.1", "3.5.2", "3.5.3",
)
_SPLIT = {"2.4.3", "3.2.1", "3.2.3"}
# smallest n for which every case's construction is guaranteed injective
THEOREM_N = 8
MIN_N = 6


class SmallNWarning(UserWarning):
    """Issued when phi is evaluated below the size where injectivity is proven."""


@dataclass(frozen=True, order=True)
class CaseLabel:
    label: str
    subsubcase: str | None = None

    def __post_init__(self):
        if self.label not in LABELS:
            raise ValueError(f"unknown case label {self.label!r}")
        if (self.subsubcase is not None) != (self.label in _SPLIT):
            raise ValueError(f"case {self.label} with subsubcase {self.subsubcase!r}")
        if self.subsubcase not in (None, "i", "ii"):
            raise ValueError(f"subsubcase must be 'i' or 'ii', got {self.subsubcase!r}")

    @property
    def supercase(self) -> int:
        return int(self.label[0])

    def __str__(self) -> str:
        return self.label if self.subsubcase is None else f"{self.label}({self.subsubcase})"


@dataclass(frozen=True)
class CaseContext:
    """Symbols fixed by the classification; ``None`` when a case does not define them.

    ``chain`` is ``(p, pt, ..., pt^k)``. ``a`` is ``x t^ell`` in the cases that
    choose an ``x``.
    """

    n: int
    p: int | None = None
    k: int | None = None
    chain: tuple = ()
    r: int | None = None
    z: int | None = None
    f: int | None = None
    f1: int | None = None
    f2: int | None = None
    x: int | None = None
    ell: int | None = None
    a: int | None = None
    y: int | None = None
    q_list: tuple = ()
    r_list: tuple = ()
    c: int | None = None
    q_m: int | None = None
    theorem_scope: bool = field(default=True, compare=False)


# -- classification -------------------------------------------------------


def _chain_length(img, x, F, E):
    """``(ell, x t^ell)`` for the longest prefix of the walk from ``x`` that keeps moving."""
    ell, a = 0, x
    while True:
        b = img[a]
        if b == a or b == F or b == E:
            return ell, a
        ell += 1
        a = b


def _pick_x(img, candidates, F, E):
    # largest ell first, then the smallest state
    best = None
    for x in candidates:
        ell, a = _chain_length(img, x, F, E)
        if best is None or ell > best[1]:
            best = (x, ell, a)
    return best


def _fixed_indeg1(img, indeg, E):
    return [q for q in range(len(img)) if img[q] == q and q != E and indeg[q] == 1]


def classify(t: Transformation) -> tuple:
    """Return ``(CaseLabel, CaseContext)`` for ``t`` in B_bf(n).

    Injectivity is proven for ``n >= 8``. Evaluating at ``n = 6, 7`` is allowed:
    the map stays total with images in W>=6_bf(n), and a
    :class:`SmallNWarning` is issued.
    """
    n = t.n
    if n < MIN_N:
        raise PreconditionError(f"phi is defined here for n >= {MIN_N}, got n={n}")
    if not in_bbf(t):
        raise PreconditionError(f"{t!r} is not in B_bf({n})")
    scope = n >= THEOREM_N
    if not scope:
        warnings.warn(f"n={n} < {THEOREM_N}: phi is total but not proven injective",
                      SmallNWarning, stacklevel=2)
    if in_wge6(t):
        return CaseLabel("1"), CaseContext(n=n, theorem_scope=scope)

    img = t.images
    E, F = n - 1, n - 2
    mids = range(1, n - 2)
    p = img[0]
    chain = [p]
    while img[chain[-1]] not in (F, E):
        chain.append(img[chain[-1]])
        if len(chain) > n:
            raise AssertionError("walk from 0t never reaches n-2 or n-1")
    k = len(chain) - 1
    pk = chain[-1]
    cyc = cycle_states(t)
    indeg = in_degrees(t)
    base = dict(n=n, p=p, k=k, chain=tuple(chain), theorem_scope=scope)

    def cycle_ctx():
        r = min(cyc)
        z = next(q for q in cyc if img[q] == r)
        return dict(base, r=r, z=z)

    if img[pk] == E:
        if cyc:
            return CaseLabel("2.1"), CaseContext(**cycle_ctx())
        if k >= 1:
            return CaseLabel("2.2"), CaseContext(**base)
        fixed = _fixed_indeg1(img, indeg, E)
        if len(fixed) >= 2:
            return CaseLabel("2.3"), CaseContext(**base, f1=fixed[0], f2=fixed[1])
        cands = [x for x in range(1, n) if indeg[x] == 0 and img[x] not in (x, F, E)]
        if cands:
            x, ell, a = _pick_x(img, cands, F, E)
            ctx = dict(base, x=x, ell=ell, a=a)
            nxt = img[a]
            if nxt == E:
                if ell >= 2:
                    return CaseLabel("2.4.1"), CaseContext(**ctx)
                if indeg[a] > 1:
                    y = min(q for q in range(n) if q != x and img[q] == a)
                    return CaseLabel("2.4.2"), CaseContext(**ctx, y=y)
                sub = "i" if p < a else "ii"
                return CaseLabel("2.4.3", sub), CaseContext(**ctx)
            if nxt == F:
                return CaseLabel("2.4.4"), CaseContext(**ctx)
            return CaseLabel("2.4.5"), CaseContext(**ctx)
        fs = [q for q in range(n) if img[q] == q and q != E]
        if len(fs) != 1:
            raise AssertionError(f"Case 2.5 expects one fixed point besides n-1, got {fs}")
        f = fs[0]
        r_list = tuple(q for q in mids if q != p and img[q] == E)
        if len(r_list) >= 2:
            return CaseLabel("2.5.1"), CaseContext(**base, f=f, r_list=r_list)
        q_list = tuple(q for q in mids if img[q] == F)
        return CaseLabel("2.5.2"), CaseContext(**base, f=f, r_list=r_list, q_list=q_list)

    q_list = tuple(q for q in mids if q != pk and img[q] == F)
    base["q_list"] = q_list
    v = len(q_list)
    if k == 0:
        if cyc:
            return CaseLabel("3.1"), CaseContext(**cycle_ctx())
        cands = [x for x in range(1, n) if img[x] not in (x, F, E)]
        if cands:
            x, ell, a = _pick_x(img, cands, F, E)
            ctx = dict(base, x=x, ell=ell, a=a)
            nxt = img[a]
            if nxt == F:
                raise AssertionError("x t^(ell+1) = n-2 contradicts membership in B_bf")
            if nxt == E:
                if ell >= 2:
                    sub = "i" if any(q < x for q in q_list) else "ii"
                    return CaseLabel("3.2.1", sub), CaseContext(**ctx)
                if indeg[a] > 1:
                    y = min(q for q in range(n) if q != x and img[q] == a)
                    return CaseLabel("3.2.2"), CaseContext(**ctx, y=y)
                sub = "i" if (v >= 1 or p < a) else "ii"
                return CaseLabel("3.2.3", sub), CaseContext(**ctx)
            return CaseLabel("3.2.4"), CaseContext(**ctx)
        fixed = _fixed_indeg1(img, indeg, E)
        if len(fixed) >= 2:
            return CaseLabel("3.3"), CaseContext(**base, f1=fixed[0], f2=fixed[1])
        if len(fixed) != 1:
            raise AssertionError(f"Case 3.4 expects one fixed point of in-degree 1, got {fixed}")
        f = fixed[0]
        r_list = tuple(q for q in mids if q not in (p, f) and img[q] == E)
        ctx = dict(base, f=f, r_list=r_list)
        if v >= 2:
            return CaseLabel("3.4.1"), CaseContext(**ctx)
        if v == 1:
            return CaseLabel("3.4.2"), CaseContext(**ctx)
        if not r_list:
            raise AssertionError("Case 3.4.3 needs a state mapped to n-1")
        return CaseLabel("3.4.3"), CaseContext(**ctx)

    if v == 0:
        if indeg[pk] == 1:
            return CaseLabel("3.5.1"), CaseContext(**base)
        y = min(q for q in range(n) if img[q] == pk and q != chain[-2])
        return CaseLabel("3.5.2"), CaseContext(**base, y=y)
    depth = _depth_to(img, set(q_list), E)
    c = max(depth.values())
    x = min(q for q, d in depth.items() if d == c)
    q_m = x
    for _ in range(c):
        q_m = img[q_m]
    return CaseLabel("3.5.3"), CaseContext(**base, c=c, x=x, q_m=q_m)


def _depth_to(img, targets, E):
    """Distance from each state that reaches ``targets`` to the first target on its walk."""
    depth = {}
    for q in range(len(img)):
        d, cur = 0, q
        while cur not in targets and d <= len(img):
            nxt = img[cur]
            if nxt == cur:
                break
            cur, d = nxt, d + 1
        if cur in targets:
            depth[q] = d
    return depth


# -- construction ---------------------------------------------------------


def _reverse_chain(s, chain):
    """``(p t^i) s = p t^(i-1)`` for ``1 <= i <= k``."""
    for i in range(1, len(chain)):
        s[chain[i]] = chain[i - 1]


def _build(t: Transformation, label: CaseLabel, ctx: CaseContext) -> Transformation:
    if label.label == "1":
        return t
    n = t.n
    E, F = n - 1, n - 2
    s = list(t.images)
    p, lab = ctx.p, label.label
    s[0] = E if label.supercase == 2 else F

    if lab in ("2.1", "3.1"):
        if lab == "2.1":
            _reverse_chain(s, ctx.chain)
        s[p] = ctx.r
    elif lab in ("2.2", "3.5.1"):
        _reverse_chain(s, ctx.chain)
        s[p] = p
    elif lab in ("2.3", "3.3"):
        s[ctx.f1], s[ctx.f2] = ctx.f2, ctx.f1
        s[p] = ctx.f2
    elif lab in ("2.4.1", "2.4.5"):
        s[p] = ctx.a
    elif lab == "2.4.2":
        s[p] = ctx.y
        s[ctx.a] = ctx.x
        s[ctx.x] = ctx.y
    elif lab == "2.4.3":
        s[p] = ctx.x
        s[ctx.a] = ctx.x
        s[ctx.x] = F if label.subsubcase == "i" else E
    elif lab == "2.4.4":
        s[p] = F
    elif lab == "2.5.1":
        s[p] = ctx.f
        rs = ctx.r_list
        for i, r in enumerate(rs):
            s[r] = rs[(i + 1) % len(rs)]
    elif lab == "2.5.2":
        s[p] = ctx.f
        qs = ctx.q_list
        for i, q in enumerate(qs):
            s[q] = qs[i - 1]  # q_1 -> q_v wraps through index -1
    elif lab == "3.2.1":
        s[p] = ctx.a
        s[ctx.a] = ctx.a if label.subsubcase == "i" else E
    elif lab == "3.2.2":
        s[p] = ctx.y
        s[ctx.a] = ctx.x
        s[ctx.x] = ctx.y
    elif lab == "3.2.3":
        s[p] = ctx.x
        s[ctx.a] = ctx.x
        s[ctx.x] = ctx.x if label.subsubcase == "i" else E
    elif lab == "3.2.4":
        s[p] = ctx.a
        walk = [ctx.x]
        for _ in range(ctx.ell):
            walk.append(t.images[walk[-1]])
        _reverse_chain(s, walk)
        s[ctx.x] = p
    elif lab == "3.4.1":
        s[p] = ctx.f
        qs = ctx.q_list
        for i, q in enumerate(qs):
            s[q] = qs[(i + 1) % len(qs)]
        for r in ctx.r_list:
            s[r] = qs[-1]
    elif lab == "3.4.2":
        s[p] = ctx.f
        s[ctx.q_list[0]] = ctx.f
        for r in ctx.r_list:
            s[r] = p
    elif lab == "3.4.3":
        s[p] = ctx.f
        rs = ctx.r_list
        s[rs[0]] = p
        for r in rs[1:]:
            s[r] = ctx.f
    elif lab == "3.5.2":
        _reverse_chain(s, ctx.chain)
        s[p] = ctx.y
        s[ctx.y] = E
    elif lab == "3.5.3":
        _reverse_chain(s, ctx.chain)
        s[p] = ctx.x
        qs = ctx.q_list
        for i, q in enumerate(qs):
            s[q] = qs[(i + 1) % len(qs)]
    else:  # pragma: no cover - LABELS is exhaustive
        raise AssertionError(lab)

    # the q_i of Supercase 3 go to p unless the case reroutes them
    if lab in ("3.1", "3.2.1", "3.2.2", "3.2.3", "3.3"):
        for q in ctx.q_list:
            s[q] = p
    elif lab == "3.2.4":
        for q in ctx.q_list:
            s[q] = ctx.x
    return Transformation(s)


def phi(t: Transformation, *, with_case: bool = False):
    """The image of ``t``; with ``with_case`` also the label and context."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", SmallNWarning)
        label, ctx = classify(t)
    if t.n < THEOREM_N:
        warnings.warn(f"n={t.n} < {THEOREM_N}: phi is total but not proven injective",
                      SmallNWarning, stacklevel=2)
    s = _build(t, label, ctx)
    return (s, label, ctx) if with_case else s


def changed_middle_states(t: Transformation, s: Transformation) -> set:
    return {q for q in range(1, t.n - 2) if t.images[q] != s.images[q]}


# -- audit ----------------------------------------------------------------


def sentinel(n: int, p1: int, p2: int) -> Transformation:
    """The W>=6 element that no semigroup with colliding pair ``{p1, p2}`` hits under phi.

    ``0 -> n-1``, ``p1 -> p2``, ``r1 -> p2``, ``r2 <-> r3`` and ``n-2 -> n-1``
    where ``r1 < r2 < r3`` are the three smallest middle states outside the
    pair; all other states are fixed.
    """
    mids = [q for q in range(1, n - 2) if q not in (p1, p2)]
    if len(mids) < 3 or p1 == p2:
        raise PreconditionError("the sentinel needs two distinct middle states and three others")
    r1, r2, r3 = mids[:3]
    img = list(range(n))
    img[0] = n - 1
    img[n - 2] = n - 1
    img[p1] = p2
    img[r1] = p2
    img[r2], img[r3] = r3, r2
    return Transformation(img)


@dataclass(frozen=True)
class AuditReport:
    size: int
    injective: bool
    image_in_wge6: bool
    collisions: tuple
    outside_wge6: tuple
    labels: dict
    has_colliding_pair: bool | None = None
    strict_bound: bool | None = None
    sentinel_absent: bool | None = None

    @property
    def ok(self) -> bool:
        flags = (self.injective, self.image_in_wge6, self.strict_bound, self.sentinel_absent)
        return all(f is not False for f in flags)

    def as_dict(self) -> dict:
        return {
            "size": self.size,
            "injective": self.injective,
            "image_in_wge6": self.image_in_wge6,
            "collisions": [
                {"s": list(s.images), "t1": list(a.images), "label1": str(la),
                 "t2": list(b.images), "label2": str(lb)}
                for s, a, la, b, lb in self.collisions
            ],
            "outside_wge6": [list(t.images) for t in self.outside_wge6],
            "labels": dict(self.labels),
            "has_colliding_pair": self.has_colliding_pair,
            "strict_bound": self.strict_bound,
            "sentinel_absent": self.sentinel_absent,
        }


def audit_injectivity(T) -> AuditReport:
    """Map every element through phi and check distinctness and the codomain.

    ``T`` may be any subset of B_bf(n). Injectivity is only guaranteed inside
    one transition semigroup, so collisions are reported, never raised.
    When ``n >= 8`` and ``T`` has a colliding pair, the strict size bound and
    the absence of every :func:`sentinel` from the image are checked too.
    """
    elements = sorted(T, key=lambda t: t.key)
    if not elements:
        return AuditReport(0, True, True, (), (), {})
    n = elements[0].n
    seen = {}
    collisions = []
    outside = []
    labels = {}
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", SmallNWarning)
        for t in elements:
            s, label, _ = phi(t, with_case=True)
            labels[str(label)] = labels.get(str(label), 0) + 1
            if s in seen:
                t0, l0 = seen[s]
                collisions.append((s, t0, l0, t, label))
            else:
                seen[s] = (t, label)
            if not in_wge6(s):
                outside.append(t)
    collisions.sort(key=lambda c: (c[0].key, c[1].key, c[3].key))

    has_pair = strict = absent = None
    if n >= THEOREM_N:
        colliding = [ps.pair for ps in pair_statuses(elements) if ps.colliding]
        has_pair = bool(colliding)
        if has_pair:
            strict = len(elements) < wge6_size(n)
            absent = all(sentinel(n, a, b) not in seen and sentinel(n, b, a) not in seen
                         for a, b in colliding)
    return AuditReport(
        size=len(elements),
        injective=not collisions,
        image_in_wge6=not outside,
        collisions=tuple(collisions),
        outside_wge6=tuple(outside),
        labels=dict(sorted(labels.items(), key=lambda kv: LABELS.index(kv[0].split("(")[0]))),
        has_colliding_pair=has_pair,
        strict_bound=strict,
        sentinel_absent=absent,
    )
