"""Schreier graphs on injective tuples, gap estimation, conditioned walks.

The graph's vertices are the injective ell-tuples over {1..n}; the edge
multiset at x is {x^g, x^(g^-1), x^h, x^(h^-1)} acting coordinatewise, kept
as a 4-row neighbor table. Both the power-iteration eigenvalue estimator
and the constrained walk sampler work off these tables through the kernel
backend.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import kernels
from .errors import RetryExhaustedError
from .perm import Permutation
from .word import GEN_G, GEN_H, Cat, Inv, Word

MAX_VERTICES = 5_000_000

# shared symbol nodes for walk words; index = draw code
_WALK_SYMBOLS: tuple[Word, ...] = (GEN_G, Inv(GEN_G), GEN_H, Inv(GEN_H))


def walk_step_tables(g: Permutation, h: Permutation) -> np.ndarray:
    """(5, n) image tables: rows g, g^-1, h, h^-1, identity."""
    n = g.degree
    return np.stack(
        [
            g.images,
            g.inverse().images,
            h.images,
            h.inverse().images,
            np.arange(n, dtype=np.int32),
        ]
    ).astype(np.int32)


class TupleGraph:
    """Implicit Schreier graph of <g, h> acting on injective ell-tuples."""

    def __init__(self, g: Permutation, h: Permutation, ell: int):
        if g.degree != h.degree:
            raise ValueError("generator degree mismatch")
        n = g.degree
        if not 1 <= ell <= n:
            raise ValueError("need 1 <= ell <= n")
        num = math.perm(n, ell)
        if num > MAX_VERTICES:
            raise ValueError(f"{num} vertices exceeds the {MAX_VERTICES} cap")
        self.g = g
        self.h = h
        self.n = n
        self.ell = ell
        self.tuples = np.array(
            list(itertools.permutations(range(n), ell)), dtype=np.int32
        ).reshape(num, ell)
        nbrs = np.empty((4, num), dtype=np.int32)
        for row, s in enumerate((g, g.inverse(), h, h.inverse())):
            nbrs[row] = self.rank_rows(s.images[self.tuples])
        self.neighbors = nbrs

    @property
    def num_vertices(self) -> int:
        return self.tuples.shape[0]

    def rank_rows(self, rows: np.ndarray) -> np.ndarray:
        """Lexicographic rank of 0-based injective tuples, vectorized.

        Digit i is the entry's position among the values unused by entries
        0..i-1; weights form the falling-factorial mixed radix.
        """
        rows = np.asarray(rows)
        ell = rows.shape[1]
        rank = np.zeros(rows.shape[0], dtype=np.int64)
        for i in range(ell):
            d = rows[:, i] - (rows[:, :i] < rows[:, i : i + 1]).sum(axis=1)
            rank = rank * (self.n - i) + d
        return rank.astype(np.int32)

    def rank_of(self, tup: Sequence[int]) -> int:
        """Index of a 1-based injective tuple."""
        arr = np.asarray([t - 1 for t in tup], dtype=np.int32)
        if arr.shape[0] != self.ell:
            raise ValueError("tuple length mismatch")
        if len(set(arr.tolist())) != self.ell or arr.min() < 0 or arr.max() >= self.n:
            raise ValueError("not an injective tuple over 1..n")
        return int(self.rank_rows(arr[None, :])[0])

    def tuple_at(self, idx: int) -> tuple[int, ...]:
        return tuple(int(x) + 1 for x in self.tuples[idx])

    def apply_adjacency(self, f: np.ndarray) -> np.ndarray:
        """Normalized adjacency: average of f over the 4 neighbor slots."""
        return kernels.adjacency_apply(f, self.neighbors)

    def dense_adjacency(self) -> np.ndarray:
        """Explicit matrix, for oracle-sized graphs only."""
        num = self.num_vertices
        if num > 20_000:
            raise ValueError("dense form too large")
        A = np.zeros((num, num))
        rows = np.arange(num)
        for j in range(4):
            np.add.at(A, (rows, self.neighbors[j]), 0.25)
        return A


@dataclass(frozen=True)
class GapEstimate:
    lambda1: float
    gap: float
    residual: float
    iterations: int
    converged: bool
    residual_trace: tuple[float, ...] = ()


def estimate_gap(
    graph: TupleGraph,
    iters: int = 4000,
    tol: float = 1e-8,
    rng: np.random.Generator | None = None,
) -> GapEstimate:
    """Second eigenvalue of the normalized adjacency by power iteration.

    Iterates the lazy operator (I + A)/2 (spectrum in [0, 1], so no
    sign-flipping) with the constant eigenvector removed exactly by mean
    subtraction each step. Convergence is declared on the relative
    residual ||A v - lambda v|| / ||v||, which can dip and rise while two
    eigenvalues fight but decreases geometrically once one wins. A
    disconnected graph yields lambda1 -> 1 and gap -> 0.
    """
    if rng is None:
        rng = np.random.default_rng(0)
    num = graph.num_vertices
    if num < 2:
        raise ValueError("graph too small for a nontrivial eigenvalue")
    v = rng.standard_normal(num)
    v -= v.mean()
    norm = np.linalg.norm(v)
    if norm == 0.0:
        raise ValueError("degenerate start vector")
    v /= norm
    av = graph.apply_adjacency(v)
    lam = 0.0
    residual = math.inf
    used = 0
    trace: list[float] = []
    for i in range(1, iters + 1):
        w = 0.5 * (v + av)
        w -= w.mean()
        wnorm = np.linalg.norm(w)
        if wnorm < 1e-300:
            # A annihilated the deflated space; spectrum is {1} + {-1,...}
            lam = -1.0
            residual = 0.0
            used = i
            trace.append(residual)
            break
        w /= wnorm
        aw = graph.apply_adjacency(w)
        lam = float(w @ aw)
        residual = float(np.linalg.norm(aw - lam * w))
        trace.append(residual)
        v, av = w, aw
        used = i
        if residual <= tol:
            break
    return GapEstimate(
        lambda1=lam,
        gap=1.0 - lam,
        residual=residual,
        iterations=used,
        converged=residual <= tol,
        residual_trace=tuple(trace),
    )


# -- conditioned lazy walks -------------------------------------------------------

_BATCH = 1024


def _validate_constraints(
    n: int, constraints: Sequence[tuple[int, int]]
) -> tuple[np.ndarray, np.ndarray]:
    sources = [c[0] for c in constraints]
    targets = [c[1] for c in constraints]
    for x in sources + targets:
        if not 1 <= x <= n:
            raise ValueError(f"constraint point {x} out of range 1..{n}")
    if len(set(sources)) != len(sources):
        raise ValueError("constraint sources must be distinct")
    if len(set(targets)) != len(targets):
        raise ValueError("constraint targets must be distinct")
    src = np.array([x - 1 for x in sources], dtype=np.int32)
    tgt = np.array([x - 1 for x in targets], dtype=np.int32)
    return src, tgt


def _conditioned_walk_counted(
    g: Permutation,
    h: Permutation,
    k: int,
    constraints: Sequence[tuple[int, int]],
    rng: np.random.Generator,
    max_tries: int | None = None,
) -> tuple[Permutation, Word, int]:
    """Rejection-sample a lazy k-step walk hitting all (source -> target)
    constraints; returns (permutation, word, trials used).

    Each step is the identity with probability 1/2, else one of g, g^-1,
    h, h^-1 with probability 1/8 each. Only the constrained points are
    tracked during rejection; the full permutation is materialized once,
    for the accepted trial. Trials consume the rng stream in a fixed
    order, so results do not depend on the internal batch size.
    """
    if g.degree != h.degree:
        raise ValueError("generator degree mismatch")
    n = g.degree
    if k < 1:
        raise ValueError("walk length must be >= 1")
    if max_tries is None:
        max_tries = 20 * n * n
    src, tgt = _validate_constraints(n, constraints)
    tables = walk_step_tables(g, h)
    # draw codes 0..7; 0..3 pick a generator row, 4..7 all mean "stay"
    code_to_row = np.array([0, 1, 2, 3, 4, 4, 4, 4], dtype=np.int32)
    done = 0
    while done < max_tries:
        batch = min(_BATCH, max_tries - done)
        codes = rng.integers(0, 8, size=(batch, k), dtype=np.int64)
        if src.size:
            finals = kernels.track_points(tables, code_to_row[codes], src)
            hits = np.nonzero((finals == tgt).all(axis=1))[0]
        else:
            hits = np.array([0])
        if hits.size:
            row = int(hits[0])
            accepted = codes[row]
            pos = kernels.track_points(
                tables,
                code_to_row[accepted][None, :],
                np.arange(n, dtype=np.int32),
            )
            sigma = Permutation(pos[0])
            word = Cat(tuple(_WALK_SYMBOLS[int(c)] for c in accepted if c < 4))
            return sigma, word, done + row + 1
        done += batch
    raise RetryExhaustedError(
        f"no walk satisfied {list(constraints)} within {max_tries} trials"
    )


def conditioned_walk(
    g: Permutation,
    h: Permutation,
    k: int,
    constraints: Sequence[tuple[int, int]],
    rng: np.random.Generator,
    max_tries: int | None = None,
) -> tuple[Permutation, Word]:
    sigma, word, _ = _conditioned_walk_counted(g, h, k, constraints, rng, max_tries)
    return sigma, word
