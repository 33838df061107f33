"""Exact distribution evolution for lazy random walks on small groups.

The full symmetric or alternating group on up to 8 points is held as an
array of image tables, indexed in lexicographic order (Lehmer ranking).
Walk distributions are dense float vectors over the group; one convolution
step is a weighted gather through precomputed translation tables, which is
the compiled-kernel hot path.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .errors import MixingCapError
from .perm import Permutation
from .word import GEN_G, GEN_H, Cat, Inv, Word

MAX_DENSE_DEGREE = 8


def _rank_rows(rows: np.ndarray) -> np.ndarray:
    """Lexicographic rank of each image row among all permutations of 0..n-1.

    Lehmer digits d_j = #{j' > j : row[j'] < row[j]} combined in factorial
    base by Horner's rule.
    """
    rows = np.asarray(rows)
    n = rows.shape[1]
    rank = np.zeros(rows.shape[0], dtype=np.int64)
    for j in range(n - 1):
        d = (rows[:, j + 1 :] < rows[:, j : j + 1]).sum(axis=1)
        rank = rank * (n - j) + d
    return rank.astype(np.int32)


def _parity_rows(rows: np.ndarray) -> np.ndarray:
    """Parity = Lehmer digit sum mod 2 (inversion count)."""
    rows = np.asarray(rows)
    n = rows.shape[1]
    total = np.zeros(rows.shape[0], dtype=np.int64)
    for j in range(n - 1):
        total += (rows[:, j + 1 :] < rows[:, j : j + 1]).sum(axis=1)
    return (total & 1).astype(np.uint8)


class DenseGroup:
    """Sym(n) or Alt(n), n <= 8, fully enumerated."""

    def __init__(self, kind: str, n: int):
        if kind not in ("sym", "alt"):
            raise ValueError("kind must be 'sym' or 'alt'")
        if not 1 <= n <= MAX_DENSE_DEGREE:
            raise ValueError(f"dense groups support n in 1..{MAX_DENSE_DEGREE}")
        self.kind = kind
        self.n = n
        all_perms = np.array(
            list(itertools.permutations(range(n))), dtype=np.int32
        ).reshape(math.factorial(n), n)
        parities = _parity_rows(all_perms)
        if kind == "sym":
            self.perms = all_perms
            self.parities = parities
            self._sym_to_index = np.arange(all_perms.shape[0], dtype=np.int32)
        else:
            mask = parities == 0
            self.perms = all_perms[mask]
            self.parities = np.zeros(self.perms.shape[0], dtype=np.uint8)
            sym_to_index = np.full(all_perms.shape[0], -1, dtype=np.int32)
            sym_to_index[np.nonzero(mask)[0]] = np.arange(
                self.perms.shape[0], dtype=np.int32
            )
            self._sym_to_index = sym_to_index

    @classmethod
    def sym(cls, n: int) -> "DenseGroup":
        return cls("sym", n)

    @classmethod
    def alt(cls, n: int) -> "DenseGroup":
        return cls("alt", n)

    @property
    def size(self) -> int:
        return self.perms.shape[0]

    @property
    def identity_index(self) -> int:
        return 0  # identity is lexicographically first in both cases

    def index_rows(self, rows: np.ndarray) -> np.ndarray:
        idx = self._sym_to_index[_rank_rows(rows)]
        if (idx < 0).any():
            raise ValueError("image row lies outside the group")
        return idx

    def index_of(self, p: Permutation) -> int:
        if p.degree != self.n:
            raise ValueError("degree mismatch")
        return int(self.index_rows(p.images[None, :])[0])

    def perm_at(self, i: int) -> Permutation:
        return Permutation(self.perms[i])

    def contains(self, p: Permutation) -> bool:
        return p.degree == self.n and (self.kind == "sym" or p.is_even())

    def even_mask(self) -> np.ndarray:
        return self.parities == 0


@dataclass(frozen=True)
class Atom:
    perm: Permutation
    prob: float
    symbol: Word | None = None


class WalkMeasure:
    """Finitely supported probability measure, optionally with word symbols."""

    def __init__(self, atoms: Iterable[Atom]):
        atoms = tuple(atoms)
        if not atoms:
            raise ValueError("measure needs at least one atom")
        degree = atoms[0].perm.degree
        if any(a.perm.degree != degree for a in atoms):
            raise ValueError("mixed degrees in measure")
        if any(a.prob <= 0 for a in atoms):
            raise ValueError("atom probabilities must be positive")
        if len({a.perm for a in atoms}) != len(atoms):
            raise ValueError("duplicate atoms; merge masses first")
        total = math.fsum(a.prob for a in atoms)
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"probabilities sum to {total}, not 1")
        self.atoms = atoms
        self.degree = degree
        self._by_perm = {a.perm: a for a in atoms}

    def prob_of(self, p: Permutation) -> float:
        a = self._by_perm.get(p)
        return a.prob if a is not None else 0.0

    def is_symmetric(self, tol: float = 1e-12) -> bool:
        return all(
            abs(a.prob - self.prob_of(a.perm.inverse())) <= tol for a in self.atoms
        )

    def min_parity_support(self) -> int:
        """0 if any even atom is charged, useful for support checks."""
        return min(a.perm.parity() for a in self.atoms)


def lazy_measure(
    support: Sequence[Permutation], symbols: Sequence[Word | None] | None = None
) -> WalkMeasure:
    """Lazy walk measure: mass 1/2 on the identity, 1/(2|S|) on each s in S.

    S must exclude the identity, contain no duplicates, and be closed under
    inverses (so the measure is symmetric).
    """
    support = list(support)
    if not support:
        raise ValueError("empty support")
    if symbols is None:
        symbols = [None] * len(support)
    if len(symbols) != len(support):
        raise ValueError("one symbol per support element required")
    seen = set(support)
    if len(seen) != len(support):
        raise ValueError("duplicate support elements")
    if any(s.is_identity() for s in support):
        raise ValueError("identity may not be in the support")
    if any(s.inverse() not in seen for s in support):
        raise ValueError("support must be closed under inverses")
    n = support[0].degree
    each = 1.0 / (2 * len(support))
    atoms = [Atom(Permutation.identity(n), 0.5, None)]
    atoms.extend(Atom(s, each, w) for s, w in zip(support, symbols))
    return WalkMeasure(atoms)


def lazy_generator_measure(g: Permutation, h: Permutation) -> WalkMeasure:
    """Lazy walk on the multiset {g, g^-1, h, h^-1}, each with mass 1/8.

    Coinciding elements merge their mass, keeping the first symbol in the
    order g, g^-1, h, h^-1, so sampled walks always have valid words.
    """
    if g.degree != h.degree:
        raise ValueError("degree mismatch")
    n = g.degree
    candidates = [
        (g, GEN_G),
        (g.inverse(), Inv(GEN_G)),
        (h, GEN_H),
        (h.inverse(), Inv(GEN_H)),
    ]
    merged: dict[Permutation, tuple[float, Word]] = {}
    for p, w in candidates:
        if p.is_identity():
            raise ValueError("generators must not be the identity")
        if p in merged:
            merged[p] = (merged[p][0] + 0.125, merged[p][1])
        else:
            merged[p] = (0.125, w)
    atoms = [Atom(Permutation.identity(n), 0.5, None)]
    atoms.extend(Atom(p, pr, w) for p, (pr, w) in merged.items())
    return WalkMeasure(atoms)


def three_cycles(n: int) -> list[Permutation]:
    """All 3-cycles of Sym(n), n(n-1)(n-2)/3 of them, in sorted triple order."""
    out = []
    for a, b, c in itertools.combinations(range(1, n + 1), 3):
        out.append(Permutation.from_cycles(n, [(a, b, c)]))
        out.append(Permutation.from_cycles(n, [(a, c, b)]))
    return out


def three_cycle_lazy_measure(n: int) -> WalkMeasure:
    """Lazy walk driven by the full 3-cycle conjugacy class."""
    return lazy_measure(three_cycles(n))


def adjacent_transposition_lazy_measure(n: int) -> WalkMeasure:
    """Lazy walk on the n-1 adjacent transpositions (i, i+1)."""
    return lazy_measure([Permutation.transposition(n, i, i + 1) for i in range(1, n)])


def transposition_lazy_measure(n: int) -> WalkMeasure:
    """Lazy walk on all n(n-1)/2 transpositions."""
    return lazy_measure(
        [
            Permutation.transposition(n, a, b)
            for a, b in itertools.combinations(range(1, n + 1), 2)
        ]
    )


def mu_prime(m: WalkMeasure, g: Permutation) -> WalkMeasure:
    """Parity-lifted measure: half of m plus half of m translated by g.

    The translate charges g*y for each atom y, i.e. the measure of the walk
    "first multiply by g, then draw from m". g must be odd so the lift
    charges both cosets.
    """
    if g.parity() != 1:
        raise ValueError("translating element must be odd")
    if g.degree != m.degree:
        raise ValueError("degree mismatch")
    masses: dict[Permutation, float] = {}
    for a in m.atoms:
        masses[a.perm] = masses.get(a.perm, 0.0) + a.prob / 2
        shifted = g * a.perm
        masses[shifted] = masses.get(shifted, 0.0) + a.prob / 2
    return WalkMeasure([Atom(p, pr) for p, pr in masses.items()])


# -- dense evolution --------------------------------------------------------------


@dataclass
class Distribution:
    group: DenseGroup
    probs: np.ndarray

    @classmethod
    def uniform(cls, group: DenseGroup) -> "Distribution":
        return cls(group, np.full(group.size, 1.0 / group.size))

    @classmethod
    def point_mass(cls, group: DenseGroup, p: Permutation | None = None) -> "Distribution":
        probs = np.zeros(group.size)
        idx = group.identity_index if p is None else group.index_of(p)
        probs[idx] = 1.0
        return cls(group, probs)


def transition_tables(m: WalkMeasure, group: DenseGroup) -> tuple[np.ndarray, np.ndarray]:
    """Gather tables for convolution: idx[i, z] = index of z * s_i^-1.

    One convolution step is new[z] = sum_i probs[i] * old[idx[i, z]].
    """
    if m.degree != group.n:
        raise ValueError("measure/group degree mismatch")
    idx = np.empty((len(m.atoms), group.size), dtype=np.int32)
    probs = np.empty(len(m.atoms))
    for i, atom in enumerate(m.atoms):
        sinv = atom.perm.inverse().images
        # (z * s^-1).images = sinv[z.images], for all rows z at once
        idx[i] = group.index_rows(sinv[group.perms])
        probs[i] = atom.prob
    return idx, probs


def evolve_exact(m: WalkMeasure, group: DenseGroup, k: int) -> Distribution:
    """Distribution of the walk after exactly k steps from the identity."""
    if k < 0:
        raise ValueError("step count must be non-negative")
    idx, probs = transition_tables(m, group)
    d = Distribution.point_mass(group).probs
    d = kernels.convolve_steps(d, idx, probs, k)
    assert abs(d.sum() - 1.0) <= 1e-9, "convolution lost probability mass"
    return Distribution(group, d)


def lp_norm(f: np.ndarray, p: float) -> float:
    """Normalized l^p norm: ((1/N) sum |f|^p)^(1/p); max-norm for p = inf."""
    f = np.asarray(f, dtype=np.float64)
    if math.isinf(p):
        return float(np.abs(f).max())
    if p < 1:
        raise ValueError("p must be >= 1")
    n = f.shape[0]
    return float((np.abs(f) ** p).sum() / n) ** (1.0 / p)


def distance_to_uniform(dist: Distribution, p: float) -> float:
    return lp_norm(dist.probs - 1.0 / dist.group.size, p)


# Alias: the distance is the normalized l^p norm of (dist - uniform).
lp_distance = distance_to_uniform


def _evolution(m: WalkMeasure, group: DenseGroup):
    """Yield (k, probs) for k = 0, 1, 2, ... lazily."""
    idx, probs = transition_tables(m, group)
    d = Distribution.point_mass(group).probs
    k = 0
    while True:
        yield k, d
        d = kernels.convolve_steps(d, idx, probs, 1)
        assert abs(d.sum() - 1.0) <= 1e-9, "convolution lost probability mass"
        k += 1


def mixing_time_lp(
    m: WalkMeasure, group: DenseGroup, threshold: float, p: float, cap: int = 100_000
) -> int:
    """Least k with normalized l^p distance to uniform <= threshold."""
    u = 1.0 / group.size
    for k, d in _evolution(m, group):
        if lp_norm(d - u, p) <= threshold:
            return k
        if k >= cap:
            raise MixingCapError(f"no l^{p} mixing below {threshold} within {cap} steps")
    raise AssertionError("unreachable")


def strong_mixing_time(m: WalkMeasure, group: DenseGroup, cap: int = 100_000) -> int:
    """Least k with |G| * max_x |mu^(k)(x) - 1/|G|| <= 1/2."""
    u = 1.0 / group.size
    for k, d in _evolution(m, group):
        if group.size * lp_norm(d - u, math.inf) <= 0.5:
            return k
        if k >= cap:
            raise MixingCapError(f"no strong mixing within {cap} steps")
    raise AssertionError("unreachable")


def check_argu(m: WalkMeasure, group: DenseGroup, eps: float, cap: int = 100_000) -> bool:
    """Strong-mixing-versus-l2 comparison: the time to reach l^inf distance
    eps^2/|G| is at most twice the time to reach l^2 distance eps/|G|."""
    size = group.size
    t2 = mixing_time_lp(m, group, eps / size, 2, cap)
    try:
        tinf = mixing_time_lp(m, group, eps * eps / size, math.inf, min(cap, 2 * t2))
    except MixingCapError:
        return False
    return tinf <= 2 * t2


def _beeth_distances(n: int, g: Permutation):
    """Yield (k, lhs, rhs) for k = 0, 1, 2, ...: l^2 distance of the
    parity-lifted walk to uniform-on-Sym versus l^2 distance of the plain
    3-cycle walk to uniform-on-Alt, both embedded in the full symmetric
    group with norms normalized by |Sym(n)|."""
    if g.parity() != 1:
        raise ValueError("g must be odd")
    group = DenseGroup.sym(n)
    m = three_cycle_lazy_measure(n)
    mp = mu_prime(m, g)
    size = group.size
    u_sym = 1.0 / size
    u_alt = np.where(group.even_mask(), 2.0 / size, 0.0)
    gen_m = _evolution(m, group)
    gen_mp = _evolution(mp, group)
    while True:
        k, d_m = next(gen_m)
        _, d_mp = next(gen_mp)
        yield k, lp_norm(d_mp - u_sym, 2), lp_norm(d_m - u_alt, 2)


def beeth_profile(n: int, g: Permutation, kmax: int) -> list[bool]:
    """For k = 1..kmax, whether the parity-lifted walk is at least as close
    to uniform-on-Sym as the plain 3-cycle walk is to uniform-on-Alt.

    The profile starts at k = 1: at k = 0 the comparison genuinely fails
    for point masses (check_beeth(n, g, 0) reports that honestly)."""
    pairs = _beeth_distances(n, g)
    next(pairs)
    out = []
    for _ in range(kmax):
        _, lhs, rhs = next(pairs)
        out.append(bool(lhs <= rhs + 1e-12))
    return out


def check_beeth(n: int, g: Permutation, k: int) -> bool:
    """Whether the parity-lift comparison holds after k steps (k >= 0)."""
    if k < 0:
        raise ValueError("k must be non-negative")
    for kk, lhs, rhs in _beeth_distances(n, g):
        if kk == k:
            return bool(lhs <= rhs + 1e-12)


def sample_walk(
    m: WalkMeasure, k: int, rng: np.random.Generator, return_word: bool = False
):
    """Draw one k-step walk product. With return_word=True also return the
    word of non-identity draws (requires every charged non-identity atom to
    carry a symbol, as lazy_generator_measure provides)."""
    n = m.degree
    probs = np.array([a.prob for a in m.atoms])
    draws = rng.choice(len(m.atoms), size=k, p=probs)
    tables = np.stack([a.perm.images for a in m.atoms]).astype(np.int32)
    pos = kernels.track_points(tables, draws[None, :], np.arange(n, dtype=np.int32))
    result = Permutation(pos[0])
    if not return_word:
        return result
    syms = []
    for i in draws:
        atom = m.atoms[int(i)]
        if atom.perm.is_identity():
            continue
        if atom.symbol is None:
            raise ValueError("measure has unlabeled non-identity atoms")
        syms.append(atom.symbol)
    return result, Cat(tuple(syms))


# -- small enumerated subgroups (shared oracle machinery) --------------------------


def generated_elements(gens: Sequence[Permutation], limit: int = 50_000) -> list[Permutation]:
    """Breadth-first closure of <gens> under right multiplication."""
    if not gens:
        raise ValueError("need at least one generator")
    n = gens[0].degree
    steps = list(gens) + [p.inverse() for p in gens]
    ident = Permutation.identity(n)
    seen = {ident}
    frontier = [ident]
    out = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for s in steps:
                y = x * s
                if y not in seen:
                    seen.add(y)
                    out.append(y)
                    nxt.append(y)
                    if len(out) > limit:
                        raise ValueError(f"group larger than limit {limit}")
        frontier = nxt
    return out


def convolution_matrix(
    atoms: Sequence[tuple[Permutation, float]], elements: Sequence[Permutation]
) -> np.ndarray:
    """Transition matrix M[x, y] = m(x^-1 y) over an explicit element list.

    Symmetric whenever the measure is; rows sum to the total mass.
    """
    index = {p: i for i, p in enumerate(elements)}
    size = len(elements)
    M = np.zeros((size, size))
    for s, pr in atoms:
        for i, x in enumerate(elements):
            j = index.get(x * s)
            if j is None:
                raise ValueError("measure support leaves the element list")
            M[i, j] += pr
    return M
