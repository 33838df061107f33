"""Support shrinking: from a random generating pair to a short word whose
permutation moves at most 3 points.

The pipeline has two stages. First, a scan over low powers of the
generators finds an element v containing a cycle of length l >= 3n/4
with v^l != e; then s0 = v^l is a non-identity word of support at most
n - l. Second, repeated commutator steps s -> [s, s^sigma] against
conditioned lazy-walk conjugators sigma shrink the support geometrically
until it is at most 3. Every intermediate element carries its word, so
the result is verifiable by evaluation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BudgetExceededError, RetryExhaustedError
from .perm import Permutation
from .schreier import _conditioned_walk_counted
from .word import (
    GEN_G,
    GEN_H,
    Cat,
    Inv,
    Pow,
    Word,
    WordElement,
    expanded_length,
)


@dataclass(frozen=True)
class LongCycleElement:
    """A word v with a distinguished long cycle and v^length != identity."""

    element: WordElement
    length: int
    cycle: tuple[int, ...]

    @property
    def word(self) -> Word:
        return self.element.word

    @property
    def perm(self) -> Permutation:
        return self.element.perm


def _candidate_key(perm: Permutation, word_len: int, j: int, family: int):
    """Validity and preference score for a long-cycle candidate.

    Returns None if invalid. The score prefers small leftover support
    m = |supp(perm^l)| (bucketed so near-ties defer to cheaper words),
    then cheap powers l * word_len, then scan order.
    """
    n = perm.degree
    cycles = perm.cycles(include_fixed=False)
    if not cycles:
        return None
    cyc = max(cycles, key=len)
    l = len(cyc)
    if 4 * l < 3 * n:
        return None
    m = sum(len(c) for c in cycles if l % len(c) != 0)
    if m < 2:
        return None
    if m <= 3:
        bucket = 0
    elif m <= 9:
        bucket = 1
    elif m <= 20:
        bucket = 2
    else:
        bucket = 3
    return (bucket, l * word_len, j, family), cyc, l


def find_long_cycle_element(
    g: Permutation,
    h: Permutation,
    rng: np.random.Generator,
    scan_constant: float = 10.0,
    fallback_words: int = 24,
) -> LongCycleElement:
    """Scan h^j and g*h^j for j up to ceil(scan_constant * ln n).

    Keeps the best-scoring valid candidate over the whole scan. If none
    is valid, retries with fresh random short words w in front (w * h^j,
    first valid wins) before giving up. The scan over j is capped at the
    order of h, past which candidates repeat. The fallback pool is sized
    for small degrees, where only one or two cycle types qualify and the
    cosets w<h> scanned per word carry few distinct types each.

    Feasibility is a function of degree and generator parity: no cycle
    type has a cycle of length l >= 3n/4 plus a second cycle whose
    length does not divide l when n <= 8 or n = 10, and every
    qualifying type below n = 14 (and at n = 15) is an odd permutation,
    out of reach when both generators are even. Those cases raise
    ValueError up front.
    """
    if g.degree != h.degree:
        raise ValueError("degree mismatch")
    n = g.degree
    if n < 9 or n == 10:
        raise ValueError(f"no qualifying cycle type exists at degree {n}")
    if g.is_even() and h.is_even() and (n < 14 or n == 15):
        raise ValueError(
            f"every qualifying cycle type at degree {n} is odd, "
            "unreachable from two even generators"
        )
    jmax = min(math.ceil(scan_constant * math.log(n)), h.order())

    best = None
    hp = h
    for j in range(1, jmax + 1):
        for family, (perm, word, wlen) in enumerate(
            [
                (hp, Pow(GEN_H, j), j),
                (g * hp, Cat((GEN_G, Pow(GEN_H, j))), j + 1),
            ]
        ):
            scored = _candidate_key(perm, wlen, j, family)
            if scored is None:
                continue
            key, cyc, l = scored
            if best is None or key < best[0]:
                best = (key, WordElement(word, perm), l, cyc)
        hp = hp * h
    if best is not None:
        _, el, l, cyc = best
        return LongCycleElement(element=el, length=l, cycle=tuple(cyc))

    # Rare: neither generator family produced a long cycle. Mix with a
    # random word and rescan, first valid candidate wins. Two tiers:
    # short words first (cheap, keeps the eventual power word small),
    # then length-2n words, long enough to decorrelate the cycle type
    # from the generators' own.
    perms = [g, g.inverse(), h, h.inverse()]
    symbols = (GEN_G, Inv(GEN_G), GEN_H, Inv(GEN_H))

    def scan_with_prefix(wlen: int) -> LongCycleElement | None:
        codes = rng.integers(0, 4, size=wlen)
        wperm = Permutation.identity(n)
        parts: list[Word] = []
        for c in codes:
            wperm = wperm * perms[c]
            parts.append(symbols[c])
        wword = Cat(tuple(parts))
        hp = h
        for j in range(1, jmax + 1):
            perm = wperm * hp
            scored = _candidate_key(perm, wlen + j, j, 0)
            if scored is not None:
                _, cyc, l = scored
                word = Cat((wword, Pow(GEN_H, j)))
                return LongCycleElement(
                    element=WordElement(word, perm), length=l, cycle=tuple(cyc)
                )
            hp = hp * h
        return None

    short_len = math.ceil(2 * math.log(n)) + 2
    for _ in range(fallback_words):
        found = scan_with_prefix(short_len)
        if found is not None:
            return found
    for _ in range(8):
        found = scan_with_prefix(2 * n)
        if found is not None:
            return found
    raise RetryExhaustedError(
        f"no element with a cycle of length >= 3n/4 and nontrivial power "
        f"found in {jmax} powers and {fallback_words + 8} fallback words"
    )


def _commutator_step_counted(
    s: WordElement,
    g: Permutation,
    h: Permutation,
    k: int,
    rng: np.random.Generator,
    sigma_budget: int = 24,
    x_one_scan: int = 10,
    max_walk_tries: int | None = None,
) -> tuple[WordElement, int]:
    """One shrink step: replace s by [s, s^sigma] for a conditioned sigma.

    sigma comes from a length-k lazy walk conditioned on two point
    constraints: one target inside supp(s) chosen so the commutator is
    never the identity, one source outside so sigma does not simply
    normalize supp(s). Let X = |supp(s) & supp(s)^sigma|; the result
    moves at most 3X points, and X = 1 gives a support-3 element
    outright.

    Acceptance: X = 1 is taken immediately; for the first x_one_scan
    draws we keep the best (X, support) seen, then settle for any draw
    with X below the rejection threshold 2(1 + (7/6)|S|^2/n) that also
    makes progress (support must strictly drop once |S| > 24). Raises
    RetryExhaustedError after sigma_budget draws.
    """
    n = g.degree
    S = s.perm.support()
    size = len(S)
    if not 4 <= size <= n - 1:
        raise ValueError(f"support size {size} outside [4, {n - 1}]")
    in_S = frozenset(S)
    complement = [x for x in range(1, n + 1) if x not in in_S]
    threshold = 2.0 * (1.0 + (7.0 / 6.0) * size * size / n)

    def build(sig: WordElement) -> tuple[WordElement, int, int]:
        tau = s.conjugated_by(sig)
        r = s.inverse() * tau.inverse() * s * tau
        Ssig = {sig.perm.apply(x) for x in S}
        X = len(in_S & Ssig)
        supp_r = r.perm.support_size()
        assert not r.perm.is_identity(), "commutator guarantee violated"
        assert supp_r <= 3 * X, "support bound 3X violated"
        return r, X, supp_r

    best: tuple[tuple[int, int], WordElement] | None = None
    trials = 0
    for t in range(sigma_budget):
        y1 = S[rng.integers(size)]
        y1p = S[rng.integers(size)]
        y2 = complement[rng.integers(len(complement))]
        y2p = s.perm.preimage(y1p)
        sigma_perm, sigma_word, tries = _conditioned_walk_counted(
            g, h, k, [(y1, y1p), (y2, y2p)], rng, max_tries=max_walk_tries
        )
        trials += tries
        r, X, supp_r = build(WordElement(sigma_word, sigma_perm))
        if X == 1:
            return r, trials
        qualifies = X <= threshold and (size <= 24 or supp_r < size)
        if t < x_one_scan:
            if qualifies and (best is None or (X, supp_r) < best[0]):
                best = ((X, supp_r), r)
            if t == x_one_scan - 1 and best is not None:
                return best[1], trials
        elif qualifies:
            return r, trials
    if best is not None:
        return best[1], trials
    raise RetryExhaustedError(
        f"no acceptable conjugator in {sigma_budget} draws "
        f"(support {size}, threshold {threshold:.1f})"
    )


def commutator_step(
    s: WordElement,
    g: Permutation,
    h: Permutation,
    k: int,
    rng: np.random.Generator,
) -> WordElement:
    """Public single-step form of the shrink iteration."""
    r, _ = _commutator_step_counted(s, g, h, k, rng)
    return r


@dataclass(frozen=True)
class ShrinkConfig:
    walk_constant: float = 40.0
    budget_coefficient: float = 10.0
    budget_exponent: int = 3
    max_iterations: int | None = None
    sigma_budget: int = 24
    x_one_scan: int = 10


@dataclass(frozen=True)
class ShrinkResult:
    element: Permutation
    word: Word
    iterations: int
    support_trace: tuple[int, ...]
    trial_counts: tuple[int, ...]
    long_cycle: LongCycleElement


def word_length_budget(n: int, config: ShrinkConfig) -> int:
    return math.ceil(
        config.budget_coefficient * n * math.log2(n) ** config.budget_exponent
    )


def shrink_support(
    g: Permutation,
    h: Permutation,
    rng: np.random.Generator,
    config: ShrinkConfig | None = None,
) -> ShrinkResult:
    """Produce a word in g, h whose permutation moves at most 3 points.

    Starts from s0 = v^l (v from find_long_cycle_element, which also
    sets the feasible degrees, n >= 9 with exceptions at small n; its
    support is at most n - l <= n/4) and iterates commutator steps until
    the support is at most 3. Iteration count is capped at
    ceil(4 log2 log2 n) + 4 and the word length at
    budget_coefficient * n * (log2 n)^exponent; exceeding either raises
    rather than returning an oversized result.
    """
    if config is None:
        config = ShrinkConfig()
    if g.degree != h.degree:
        raise ValueError("degree mismatch")
    n = g.degree
    v = find_long_cycle_element(g, h, rng)
    l = v.length
    s = WordElement(Pow(v.word, l), v.perm**l)
    supp = s.perm.support_size()
    assert 0 < supp <= n - l, "v^l support must be nonzero and avoid the cycle"

    k = math.ceil(config.walk_constant * math.log(n))
    budget = word_length_budget(n, config)
    max_iter = (
        config.max_iterations
        if config.max_iterations is not None
        else math.ceil(4 * math.log2(math.log2(n))) + 4
    )
    trace = [supp]
    trials: list[int] = []
    iterations = 0
    while s.perm.support_size() > 3:
        if iterations >= max_iter:
            raise RetryExhaustedError(
                f"support still {s.perm.support_size()} after {max_iter} steps"
            )
        s, tries = _commutator_step_counted(
            s,
            g,
            h,
            k,
            rng,
            sigma_budget=config.sigma_budget,
            x_one_scan=config.x_one_scan,
        )
        iterations += 1
        trace.append(s.perm.support_size())
        trials.append(tries)
        if expanded_length(s.word) > budget:
            raise BudgetExceededError(
                f"word length {expanded_length(s.word)} exceeds budget {budget}"
            )
    if iterations > 0:
        # commutators are even, and an even non-identity element moving
        # at most 3 points is exactly a 3-cycle
        assert s.perm.is_even() and s.perm.support_size() == 3
    return ShrinkResult(
        element=s.perm,
        word=s.word,
        iterations=iterations,
        support_trace=tuple(trace),
        trial_counts=tuple(trials),
        long_cycle=v,
    )
