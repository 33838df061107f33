"""Spectral-gap transfer from a class walk to the generator walk.

The lazy walk p on S = {g, h, g^-1, h^-1} is compared against a reference
walk p' whose gap is known: uniform on all 3-cycles when both generators are
even, else the average of the two translated classes gC and g^-1 C (using an
odd generator as translator, so both cosets are charged). Writing each
reference element y as a word in the generators gives the comparison
constant

    A = (1 / p(S)) * max_{s in S} sum_y |y| N(s, y) p'(y)

with |y| the expanded word length and N(s, y) the number of occurrences of
the symbol s, and then delta(p) >= delta(p') / A.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from .perm import Permutation
from .walk import WalkMeasure, three_cycles
from .word import (
    GEN_G,
    GEN_H,
    Cat,
    Inv,
    Word,
    expanded_length,
    generator_counts,
)
from .synth import SynthContext, synthesize

__all__ = [
    "ComparisonReport",
    "bfs_words",
    "reference_measure",
    "compute_A",
    "comparison_report",
    "gap_lower_bound",
    "l2_comparison_bound",
    "dense_walk_gap",
]

MAX_BFS_DEGREE = 8
MAX_EXACT_DEGREE = 14


@dataclass(frozen=True)
class ComparisonReport:
    n: int
    A: Fraction | float
    gap_reference: Fraction
    gap_lower_bound: Fraction | float
    mode: str
    words_used: int
    max_word_length: int
    sample_error: float | None = None


def bfs_words(g: Permutation, h: Permutation) -> dict[Permutation, Word]:
    """Shortest words for every element of <g, h>, breadth first.

    Degree capped at 8 (the table holds the whole group). This is the word
    provider below the synthesis pipeline's feasible range: no cycle type
    with longest cycle l >= 3n/4 and l-nondividing remainder exists there.
    """
    if g.degree != h.degree:
        raise ValueError("generator degree mismatch")
    if g.degree > MAX_BFS_DEGREE:
        raise ValueError(f"breadth-first word tables need degree <= {MAX_BFS_DEGREE}")
    moves = (
        (GEN_G, g),
        (Inv(GEN_G), g.inverse()),
        (GEN_H, h),
        (Inv(GEN_H), h.inverse()),
    )
    ident = Permutation.identity(g.degree)
    words: dict[Permutation, Word] = {ident: Cat(())}
    queue: deque[Permutation] = deque([ident])
    while queue:
        cur = queue.popleft()
        wcur = words[cur]
        for sym, p in moves:
            nxt = cur * p
            if nxt not in words:
                words[nxt] = Cat((wcur, sym))
                queue.append(nxt)
    return words


def reference_measure(g: Permutation, h: Permutation) -> dict[Permutation, Fraction]:
    """The reference walk p' as exact masses.

    Both generators even: uniform on the 3-cycle class (inside Alt like the
    generator walk). Otherwise the walk lives on all of Sym, and p' is the
    average of the translated classes tC and t^-1 C for an odd generator t;
    the two cosets can overlap, so masses accumulate.
    """
    n = g.degree
    cls = three_cycles(n)
    base = Fraction(1, len(cls))
    if g.is_even() and h.is_even():
        return {c: base for c in cls}
    t = g if not g.is_even() else h
    out: dict[Permutation, Fraction] = {}
    for trans in (t, t.inverse()):
        for c in cls:
            y = trans * c
            out[y] = out.get(y, Fraction(0)) + base / 2
    return out


def _word_provider(
    g: Permutation, h: Permutation, ctx: SynthContext | None
) -> Callable[[Permutation], Word]:
    if ctx is not None:
        return lambda y: synthesize(ctx, y)
    table = bfs_words(g, h)

    def lookup(y: Permutation) -> Word:
        try:
            return table[y]
        except KeyError:
            raise ValueError("reference element outside <g, h>") from None

    return lookup


def _parse_mode(mode: str) -> int | None:
    """None for exact, sample count for "sample:M"."""
    if mode == "exact":
        return None
    if mode.startswith("sample:"):
        m = int(mode.split(":", 1)[1])
        if m <= 0:
            raise ValueError("sample count must be positive")
        return m
    raise ValueError(f"mode must be 'exact' or 'sample:M', got {mode!r}")


def _accumulate(
    g: Permutation,
    h: Permutation,
    ctx: SynthContext | None,
    mode: str,
    rng: np.random.Generator | None,
    per_generator: bool,
):
    """Shared core: the four per-symbol sums plus word statistics."""
    n = g.degree
    pprime = reference_measure(g, h)
    provider = _word_provider(g, h, ctx)
    samples = _parse_mode(mode)
    inv_ps = 8 if per_generator else 2  # 1/p(s) vs 1/p(S) under the lazy measure

    if samples is None:
        if n > MAX_EXACT_DEGREE:
            raise ValueError(
                f"exact mode enumerates ~n^3/3 words; capped at n <= {MAX_EXACT_DEGREE}"
            )
        items = list(pprime.items())
        weights = None
    else:
        if rng is None:
            raise ValueError("sample mode needs an rng")
        support = list(pprime.keys())
        probs = np.array([float(pprime[y]) for y in support])
        probs /= probs.sum()
        draws = rng.choice(len(support), size=samples, p=probs)
        items = [(support[int(i)], Fraction(1, samples)) for i in draws]
        weights = probs  # kept only to signal sampled mode below

    sums = [Fraction(0)] * 4
    max_len = 0
    max_term = 0
    for y, mass in items:
        w = provider(y)
        length = expanded_length(w)
        cnt = generator_counts(w)
        max_len = max(max_len, length)
        for i, c in enumerate((cnt.g, cnt.h, cnt.g_inv, cnt.h_inv)):
            sums[i] += length * c * mass
            max_term = max(max_term, length * c)

    a_value = inv_ps * max(sums)
    limit = inv_ps * Fraction(max_len) ** 2
    assert a_value <= limit, "A exceeded its arithmetic bound (1/p(S)) * max|y|^2"

    err = None
    if weights is not None:
        # Hoeffding half-width at 95% over the four sums; reported, not asserted
        a_value = float(a_value)
        err = inv_ps * max_term * math.sqrt(math.log(8 / 0.05) / (2 * samples))
    return a_value, len(items), max_len, err


def compute_A(
    g: Permutation,
    h: Permutation,
    ctx: SynthContext | None,
    mode: str = "exact",
    rng: np.random.Generator | None = None,
    *,
    per_generator: bool = False,
) -> Fraction | float:
    """The comparison constant A; exact Fraction in exact mode.

    ctx None selects breadth-first word tables (degree <= 8); otherwise
    every reference element is synthesized through the context. Synthesis
    failures propagate.
    """
    a_value, _, _, _ = _accumulate(g, h, ctx, mode, rng, per_generator)
    return a_value


def comparison_report(
    g: Permutation,
    h: Permutation,
    ctx: SynthContext | None,
    mode: str = "exact",
    rng: np.random.Generator | None = None,
    *,
    per_generator: bool = False,
) -> ComparisonReport:
    n = g.degree
    a_value, used, max_len, err = _accumulate(g, h, ctx, mode, rng, per_generator)
    ref = Fraction(3, n - 1)
    return ComparisonReport(
        n=n,
        A=a_value,
        gap_reference=ref,
        gap_lower_bound=gap_lower_bound(a_value, ref),
        mode=mode,
        words_used=used,
        max_word_length=max_len,
        sample_error=err,
    )


def gap_lower_bound(A: Fraction | float, delta_prime: Fraction) -> Fraction | float:
    """delta(p) >= delta(p') / A."""
    if A <= 0:
        raise ValueError("comparison constant must be positive")
    return delta_prime / A


def l2_comparison_bound(
    k: int,
    A: float,
    reference_decay: Callable[[int], float],
    group_order: int,
) -> float:
    """Right-hand side of the l2 transfer: |G| e^(-k/2A) + decay(round(k/2A))^2.

    reference_decay(j) is the reference walk's l2 distance to uniform after
    j steps; it and any distance the bound is compared against must share a
    normalization convention. group_order is explicit because the printed
    inequality needs |G| and nothing else here knows the group.
    """
    if A <= 0:
        raise ValueError("comparison constant must be positive")
    j = round(k / (2 * A))
    return group_order * math.exp(-k / (2 * A)) + reference_decay(j) ** 2


def dense_walk_gap(
    atoms: list[tuple[Permutation, float]], elements: list[Permutation]
) -> float:
    """Ordering spectral gap 1 - lambda_2 of a symmetric measure's walk,
    by dense eigensolve over an explicit element list (oracle-sized groups)."""
    from .walk import convolution_matrix

    M = convolution_matrix(atoms, elements)
    eig = np.linalg.eigvalsh(M)
    return float(1.0 - eig[-2])
