"""Synthesis of arbitrary permutations as compressed generator words.

Pipeline: shrink the generators to a 3-cycle ``kappa`` parked inside a long
cycle ``v``, label the cycle points 1..l, and build a base 3-cycle
B = (1 2 x) in those labels. Any labeled 3-cycle is then a commutator of
two "edge atoms" (conjugates of kappa, or of B by powers of phi = v * B^-1),
and an arbitrary target factors into 3-cycles that short random walks
relocate into the cycle. Every intermediate carries its word, so the final
word evaluates to the target exactly rather than approximately.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import RetryExhaustedError, SideConditionError
from .perm import Permutation, three_cycle_factorization
from .shrink import LongCycleElement, ShrinkConfig, shrink_support
from .schreier import conditioned_walk
from .walk import WalkMeasure, lazy_generator_measure, sample_walk
from .word import (
    GEN_G,
    GEN_H,
    Cat,
    Inv,
    Word,
    WordElement,
    concat,
    evaluate,
    power,
)

__all__ = [
    "CycleLabeling",
    "SynthContext",
    "prepare_context",
    "solve_congruence",
    "build_base_cycle",
    "build_3cycle",
    "build_3cycle_via_phi",
    "synthesize",
]


class CycleLabeling:
    """Bijective labels 1..l for the points of a distinguished cycle.

    ``points`` lists the cycle in its cyclic order, so when it comes from a
    long-cycle element v, point_at(i)^v = point_at(shift(i, 1)).
    """

    def __init__(self, points: tuple[int, ...]):
        self.points = tuple(points)
        self._lookup = {p: i + 1 for i, p in enumerate(self.points)}
        if len(self._lookup) != len(self.points):
            raise ValueError("cycle points repeat")

    @property
    def length(self) -> int:
        return len(self.points)

    def point_at(self, label: int) -> int:
        if not 1 <= label <= len(self.points):
            raise ValueError(f"label {label} out of range 1..{len(self.points)}")
        return self.points[label - 1]

    def label_of(self, point: int) -> int:
        """Label of a point; 0 when the point is off the cycle."""
        return self._lookup.get(point, 0)

    def shift(self, label: int, delta: int) -> int:
        return (label - 1 + delta) % len(self.points) + 1

    def rotated(self, origin: int) -> "CycleLabeling":
        """Same cycle with the label origin moved so ``origin`` becomes 1."""
        r = origin - 1
        return CycleLabeling(self.points[r:] + self.points[:r])

    def __repr__(self) -> str:
        return f"CycleLabeling({self.points!r})"


@dataclass
class SynthContext:
    """Everything synthesize() needs, word-paired throughout.

    The gamma pool is shared mutable state: queries extend it on demand and
    later synthesize() calls reuse the grown pool.
    """

    g: Permutation
    h: Permutation
    v: LongCycleElement
    labeling: CycleLabeling
    kappa: WordElement
    rng: np.random.Generator
    walk_k: int
    measure: WalkMeasure
    relocation_cap: int
    pool_cap: int
    kappa_labels: tuple[int, int, int] = (0, 0, 0)
    base: WordElement | None = None
    x: int = 0
    phi: WordElement | None = None
    parity_witness: WordElement | None = None
    pool_gammas: list[WordElement] = field(default_factory=list)
    pool_rows: np.ndarray | None = None

    @property
    def degree(self) -> int:
        return self.g.degree

    @property
    def cycle_length(self) -> int:
        return self.labeling.length

    @property
    def cycle_set(self) -> frozenset[int]:
        return frozenset(self.labeling.points)


def _draw_walk(ctx: SynthContext, rng: np.random.Generator | None = None) -> WordElement:
    perm, word = sample_walk(ctx.measure, ctx.walk_k, rng or ctx.rng, return_word=True)
    return WordElement(word, perm)


def _v_power(ctx: SynthContext, s: int) -> WordElement:
    """v^s with the exponent folded into -l/2..l/2.

    Off-cycle action differs between the two directions, but everything we
    conjugate through this is supported inside the cycle, where v has period
    exactly l.
    """
    l = ctx.labeling.length
    s %= l
    sp = s if s <= l - s else s - l
    return WordElement(power(ctx.v.word, sp), ctx.v.perm ** sp)


def _kappa_labels(kp: Permutation, lab: CycleLabeling) -> tuple[int, int, int]:
    supp = kp.support()
    if len(supp) != 3 or any(lab.label_of(p) == 0 for p in supp):
        raise ValueError("kappa must be a 3-cycle supported inside the cycle")
    c1 = min(lab.label_of(p) for p in supp)
    p1 = lab.point_at(c1)
    c2 = lab.label_of(kp.apply(p1))
    c3 = lab.label_of(kp.apply(kp.apply(p1)))
    return c1, c2, c3


def _upgrade_transposition(
    g: Permutation, h: Permutation, t: WordElement, k: int, rng: np.random.Generator
) -> WordElement:
    """Promote (a b) to the 3-cycle (a c b) = t * t^sigma with a^sigma = b, b^sigma = c."""
    n = g.degree
    a, b = t.perm.support()
    others = [p for p in range(1, n + 1) if p != a and p != b]
    c = int(others[int(rng.integers(len(others)))])
    sigma, sw = conditioned_walk(g, h, k, [(a, b), (b, c)], rng)
    out = t * t.conjugated_by(WordElement(sw, sigma))
    assert out.perm == Permutation.from_cycles(n, [(a, c, b)])
    return out


def _relocate_kappa(ctx: SynthContext) -> None:
    inside = ctx.cycle_set
    if set(ctx.kappa.perm.support()) <= inside:
        return
    start = ctx.kappa
    for _ in range(ctx.relocation_cap):
        rho = _draw_walk(ctx)
        cand = start.conjugated_by(rho)
        if set(cand.perm.support()) <= inside:
            ctx.kappa = cand
            return
    raise RetryExhaustedError("could not conjugate the 3-cycle into the long cycle")


def prepare_context(
    g: Permutation,
    h: Permutation,
    rng: np.random.Generator,
    config: ShrinkConfig | None = None,
    *,
    walk_constant: float = 40.0,
    pool_init: int = 256,
    pool_cap: int = 8192,
) -> SynthContext:
    """Shrink the generators and assemble the label machinery.

    Propagates the shrink feasibility errors for small degrees and even-even
    pairs below the threshold; RetryExhaustedError when randomized placement
    stalls (for example on intransitive generator pairs).
    """
    if g.degree != h.degree:
        raise ValueError("generator degree mismatch")
    n = g.degree
    res = shrink_support(g, h, rng, config)
    v = res.long_cycle
    kappa = WordElement(res.word, res.element)
    k = math.ceil(walk_constant * math.log(n))
    if kappa.perm.support_size() == 2:
        kappa = _upgrade_transposition(g, h, kappa, k, rng)
    ctx = SynthContext(
        g=g,
        h=h,
        v=v,
        labeling=CycleLabeling(v.cycle),
        kappa=kappa,
        rng=rng,
        walk_k=k,
        measure=lazy_generator_measure(g, h),
        relocation_cap=k,
        pool_cap=pool_cap,
    )
    _relocate_kappa(ctx)
    build_base_cycle(ctx, rng)
    _attach_phi(ctx)
    if not g.is_even():
        ctx.parity_witness = WordElement(GEN_G, g)
    elif not h.is_even():
        ctx.parity_witness = WordElement(GEN_H, h)
    _extend_pool(ctx, pool_init)
    return ctx


def solve_congruence(
    gamma: Permutation, a: int, labeling: CycleLabeling
) -> tuple[int, int] | None:
    """Smallest (r, s) with gamma mapping the cycle edge (r, r+1) onto two
    labeled points whose label gap is a - 1, where s is the cycle shift that
    moves label 1 onto r's image. None when no edge lands suitably.

    With gamma the identity this says labels advance by 1, so a = 2 yields
    (1, 0) and anything else has no solution.
    """
    l = labeling.length
    for r in range(1, l):
        u = labeling.label_of(gamma.apply(labeling.point_at(r)))
        w = labeling.label_of(gamma.apply(labeling.point_at(r + 1)))
        if u and w and (w - u) % l == (a - 1) % l:
            return r, (u - 1) % l
    return None


def build_base_cycle(
    ctx: SynthContext, rng: np.random.Generator
) -> tuple[Word, int]:
    """Install B = kappa^{v^s gamma} = (1 2 x) in cycle labels; return (word, x).

    Scans gamma = identity, then fresh lazy walks, for a shift s placing two
    of the conjugate's points on cyclically adjacent labels with the third
    also on the cycle. Instead of paying more conjugation to move that pair
    onto labels (1, 2), the labeling origin rotates to meet it, which costs
    no word length. Rotating invalidates any existing pool rows and phi, so
    this runs during context preparation, before either exists.
    """
    lab = ctx.labeling
    l = lab.length
    c = _kappa_labels(ctx.kappa.perm, lab)
    offs = np.arange(l, dtype=np.int64)
    ident = WordElement(Cat(()), Permutation.identity(ctx.degree))
    for attempt in range(ctx.relocation_cap + 1):
        gamma = ident if attempt == 0 else _draw_walk(ctx, rng)
        fwd = np.array(
            [lab.label_of(gamma.perm.apply(p)) for p in lab.points], dtype=np.int64
        )
        best = None  # (power cost, s, anchor label ca, r, w)
        for e in range(3):
            ca, cb, cc = c[e], c[(e + 1) % 3], c[(e + 2) % 3]
            a_s = fwd[(offs + ca - 1) % l]
            b_s = fwd[(offs + cb - 1) % l]
            w_s = fwd[(offs + cc - 1) % l]
            ok = (a_s > 0) & (w_s > 0) & (b_s == a_s % l + 1)
            for s in np.nonzero(ok)[0]:
                s = int(s)
                cand = (min(s, l - s), s, ca, int(a_s[s]), int(w_s[s]))
                if best is None or cand < best:
                    best = cand
        if best is None:
            continue
        _, s, ca, r, w_label = best
        atom = ctx.kappa
        if s:
            atom = atom.conjugated_by(_v_power(ctx, s))
        if attempt:
            atom = atom.conjugated_by(gamma)
        ctx.labeling = lab.rotated(r)
        x = (w_label - r) % l + 1
        expected = Permutation.from_cycles(
            ctx.degree,
            [(ctx.labeling.point_at(1), ctx.labeling.point_at(2), ctx.labeling.point_at(x))],
        )
        assert atom.perm == expected
        assert x >= 3
        ctx.base = atom
        ctx.x = x
        ctx.kappa_labels = _kappa_labels(ctx.kappa.perm, ctx.labeling)
        ctx.pool_gammas.clear()
        ctx.pool_rows = None
        ctx.phi = None
        return atom.word, x
    raise RetryExhaustedError("no conjugate of kappa meets the cycle adjacently")


def _attach_phi(ctx: SynthContext) -> None:
    """phi = v * B^-1 fixes label 1 and splits the rest into the two orbits
    (2 .. x-1) and (x .. l); asserted point by point."""
    base = ctx.base
    phi = WordElement(
        concat(ctx.v.word, Inv(base.word)), ctx.v.perm * base.perm.inverse()
    )
    lab, l, x = ctx.labeling, ctx.labeling.length, ctx.x
    assert phi.perm.apply(lab.point_at(1)) == lab.point_at(1)
    for i in range(2, l + 1):
        if i == x - 1:
            j = 2
        elif i == l:
            j = x
        else:
            j = i + 1
        assert phi.perm.apply(lab.point_at(i)) == lab.point_at(j)
    ctx.phi = phi


# -- edge atoms ---------------------------------------------------------------------
#
# An edge atom for (alpha, beta) is a word-paired 3-cycle sending
# point_at(alpha) -> point_at(beta) -> third -> point_at(alpha); the caller
# constrains which points may serve as the third.


def _preimage_label_row(ctx: SynthContext, gamma: WordElement) -> np.ndarray:
    """row[j - 1] = label of point_at(j)^(gamma^-1), 0 when off the cycle."""
    lab = ctx.labeling
    inv = gamma.perm.inverse()
    return np.array([lab.label_of(inv.apply(p)) for p in lab.points], dtype=np.int64)


def _extend_pool(ctx: SynthContext, count: int) -> None:
    new = [_draw_walk(ctx) for _ in range(count)]
    rows = np.stack([_preimage_label_row(ctx, gm) for gm in new])
    ctx.pool_gammas.extend(new)
    ctx.pool_rows = rows if ctx.pool_rows is None else np.vstack([ctx.pool_rows, rows])


def _conjugated_atom(
    ctx: SynthContext,
    gamma: WordElement,
    s: int,
    alpha: int,
    beta: int,
    third: int,
) -> WordElement:
    out = ctx.kappa
    if s % ctx.labeling.length:
        out = out.conjugated_by(_v_power(ctx, s))
    if not gamma.perm.is_identity():
        out = out.conjugated_by(gamma)
    lab = ctx.labeling
    expected = Permutation.from_cycles(
        ctx.degree, [(lab.point_at(alpha), lab.point_at(beta), third)]
    )
    assert out.perm == expected
    return out


def _pool_edge_atom(
    ctx: SynthContext, alpha: int, beta: int, forbidden: frozenset[int]
) -> tuple[WordElement, int] | None:
    """Pool route: kappa^{v^s gamma} realizes (alpha -> beta) whenever gamma's
    preimage labels of alpha and beta differ by one of kappa's label gaps.

    Scans pool rows in insertion order, doubling the pool on a miss; None
    once the cap is reached (callers fall back to the phi route).
    """
    lab = ctx.labeling
    l = lab.length
    c = ctx.kappa_labels
    while True:
        rows = ctx.pool_rows
        ra = rows[:, alpha - 1]
        rb = rows[:, beta - 1]
        hits: list[tuple[int, int, int]] = []
        for e in range(3):
            ca, cb, cc = c[e], c[(e + 1) % 3], c[(e + 2) % 3]
            mask = (ra > 0) & (rb > 0) & ((rb - ra) % l == (cb - ca) % l)
            for idx in np.nonzero(mask)[0]:
                hits.append((int(idx), ca, cc))
        hits.sort()
        for idx, ca, cc in hits:
            s = (int(ra[idx]) - ca) % l
            gamma = ctx.pool_gammas[idx]
            third = gamma.perm.apply(lab.point_at(lab.shift(cc, s)))
            if third in forbidden:
                continue
            return _conjugated_atom(ctx, gamma, s, alpha, beta, third), third
        if len(ctx.pool_gammas) >= ctx.pool_cap:
            return None
        _extend_pool(ctx, len(ctx.pool_gammas))


def _phi_edge_atom(
    ctx: SynthContext, alpha: int, beta: int, forbidden: frozenset[int]
) -> tuple[WordElement, int]:
    """Phi route: conjugates of B by phi powers cover every label edge.

    B^{phi^m} = (1, 2+m, x+m) with the two legs advancing inside their own
    orbits, so edges out of label 1 come directly (second leg) or from the
    inverse (third leg), and a v shift moves label 1 onto alpha. Word length
    grows linearly in the phi power, hence fallback only.
    """
    lab = ctx.labeling
    l, x = lab.length, ctx.x
    l1, l2 = x - 2, l - x + 1
    y = (beta - alpha) % l + 1
    rot = alpha - 1
    cands: list[tuple[int, int, bool]] = []
    seen: set[int] = set()
    if 2 <= y <= x - 1:
        for i in range(l2):
            m = y - 2 + i * l1
            z = x + (m % l2)
            if z not in seen:
                seen.add(z)
                cands.append((m, z, False))
    else:
        for i in range(l1):
            m = y - x + i * l2
            z = 2 + (m % l1)
            if z not in seen:
                seen.add(z)
                cands.append((m, z, True))
    for m, z, inverted in cands:
        third = lab.point_at(lab.shift(z, rot))
        if third in forbidden:
            continue
        atom = ctx.base
        if m:
            atom = atom.conjugated_by(
                WordElement(power(ctx.phi.word, m), ctx.phi.perm ** m)
            )
        if inverted:
            atom = atom.inverse()
        if rot:
            atom = atom.conjugated_by(_v_power(ctx, rot))
        expected = Permutation.from_cycles(
            ctx.degree, [(lab.point_at(alpha), lab.point_at(beta), third)]
        )
        assert atom.perm == expected
        return atom, third
    raise SideConditionError(
        f"every admissible third point for edge {alpha}->{beta} is forbidden"
    )


def _commutator_3cycle(ctx: SynthContext, r: int, s: int, t: int, atom_fn):
    """[P1, P2] with P1 = (r t c), P2 = (r s d): when the five labels sit on
    distinct points, P1^-1 P2^-1 P1 P2 = (r s t). Needs c != d, hence d joins
    P1's forbidden set."""
    lab = ctx.labeling
    pr, ps, pt = lab.point_at(r), lab.point_at(s), lab.point_at(t)
    got = atom_fn(ctx, r, s, frozenset((pr, ps, pt)))
    if got is None:
        return None
    p2, d = got
    got = atom_fn(ctx, r, t, frozenset((pr, ps, pt, d)))
    if got is None:
        return None
    p1, _ = got
    out = p1.inverse() * p2.inverse() * p1 * p2
    assert out.perm == Permutation.from_cycles(ctx.degree, [(pr, ps, pt)])
    return out


def build_3cycle(ctx: SynthContext, r: int, s: int, t: int) -> WordElement:
    """Word-paired 3-cycle point_at(r) -> point_at(s) -> point_at(t)."""
    if len({r, s, t}) != 3:
        raise ValueError("labels must be distinct")
    out = _commutator_3cycle(ctx, r, s, t, _pool_edge_atom)
    if out is None:
        out = _commutator_3cycle(ctx, r, s, t, _phi_edge_atom)
    return out


def build_3cycle_via_phi(ctx: SynthContext, r: int, s: int, t: int) -> WordElement:
    """Phi-only variant of build_3cycle; longer words, no pool dependence."""
    if len({r, s, t}) != 3:
        raise ValueError("labels must be distinct")
    return _commutator_3cycle(ctx, r, s, t, _phi_edge_atom)


# -- full synthesis -----------------------------------------------------------------


def _factor_labels(lab: CycleLabeling, c: Permutation) -> tuple[int, int, int]:
    q = min(c.support())
    return (
        lab.label_of(q),
        lab.label_of(c.apply(q)),
        lab.label_of(c.apply(c.apply(q))),
    )


def _factor_word(ctx: SynthContext, factor: Permutation) -> Word:
    inside = ctx.cycle_set
    if set(factor.support()) <= inside:
        return build_3cycle(ctx, *_factor_labels(ctx.labeling, factor)).word
    for _ in range(ctx.relocation_cap):
        rho = _draw_walk(ctx)
        moved = factor.conjugate(rho.perm)
        if set(moved.support()) <= inside:
            inner = build_3cycle(ctx, *_factor_labels(ctx.labeling, moved))
            assert rho.perm * inner.perm * rho.perm.inverse() == factor
            return concat(rho.word, inner.word, Inv(rho.word))
    raise RetryExhaustedError("could not conjugate a 3-cycle factor into the cycle")


def synthesize(ctx: SynthContext, target: Permutation) -> Word:
    """Word over (g, h) evaluating exactly to target.

    Odd targets spend one odd generator first; the even remainder factors
    into 3-cycles handled one by one. Raises ValueError for an odd target
    when both generators are even (the target is then outside the group).
    """
    if target.degree != ctx.degree:
        raise ValueError("degree mismatch")
    parts: list[Word] = []
    rest = target
    if not target.is_even():
        if ctx.parity_witness is None:
            raise ValueError("odd target but both generators are even")
        parts.append(ctx.parity_witness.word)
        rest = ctx.parity_witness.perm.inverse() * target
    for factor in three_cycle_factorization(rest):
        parts.append(_factor_word(ctx, factor))
    out = Cat(tuple(parts))
    assert evaluate(out, ctx.g, ctx.h) == target
    return out
