"""Word synthesis: labeling arithmetic, the congruence solver, base-cycle
construction, commutator 3-cycles, and end-to-end exactness."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from permword import (
    Cat,
    Permutation,
    evaluate,
    expanded_length,
    node_count,
    prepare_context,
    random_even,
    random_uniform,
    synthesize,
)
from permword.synth import (
    CycleLabeling,
    build_3cycle,
    build_3cycle_via_phi,
    solve_congruence,
)

from conftest import seeded_pair


@pytest.fixture(scope="module")
def ctx20():
    g, h, rng = seeded_pair(20, 0)
    return prepare_context(g, h, rng)


def test_cycle_labeling_roundtrip_and_shift():
    lab = CycleLabeling((4, 9, 2, 7, 5))
    assert lab.length == 5
    for label in range(1, 6):
        assert lab.label_of(lab.point_at(label)) == label
    assert lab.label_of(3) == 0
    assert lab.shift(5, 1) == 1
    assert lab.shift(1, -1) == 5
    rot = lab.rotated(3)
    assert rot.points == (2, 7, 5, 4, 9)
    assert rot.label_of(2) == 1
    with pytest.raises(ValueError):
        lab.point_at(6)
    with pytest.raises(ValueError):
        CycleLabeling((1, 2, 2))


def test_solve_congruence_identity_cases():
    lab = CycleLabeling(tuple(range(1, 8)))
    e = Permutation.identity(7)
    assert solve_congruence(e, 2, lab) == (1, 0)
    for a in (3, 4, 7):
        assert solve_congruence(e, a, lab) is None


@settings(max_examples=40)
@given(st.permutations(list(range(10))), st.integers(2, 7))
def test_solve_congruence_against_naive_scan(images, a):
    gamma = Permutation(images)
    lab = CycleLabeling(tuple(range(1, 8)))  # labels on points 1..7 of 10
    l = lab.length
    naive = None
    for r in range(1, l):
        u = lab.label_of(gamma.apply(lab.point_at(r)))
        w = lab.label_of(gamma.apply(lab.point_at(r + 1)))
        if u and w and (w - u) % l == (a - 1) % l:
            naive = (r, (u - 1) % l)
            break
    assert solve_congruence(gamma, a, lab) == naive


def test_prepare_context_invariants(ctx20):
    ctx = ctx20
    n = 20
    assert ctx.cycle_length >= 3 * n / 4
    # kappa is a 3-cycle supported inside the distinguished cycle
    assert ctx.kappa.perm.support_size() == 3
    assert set(ctx.kappa.perm.support()) <= set(ctx.labeling.points)
    assert evaluate(ctx.kappa.word, ctx.g, ctx.h) == ctx.kappa.perm
    # base cycle realizes labels (1, 2, x) with 3 <= x <= l
    assert ctx.base is not None and 3 <= ctx.x <= ctx.cycle_length
    pts = tuple(ctx.labeling.point_at(i) for i in (1, 2, ctx.x))
    assert ctx.base.perm == Permutation.from_cycles(n, [pts])
    assert evaluate(ctx.base.word, ctx.g, ctx.h) == ctx.base.perm
    # phi fixes label 1 and rotates the two label arcs
    assert ctx.phi is not None
    p1 = ctx.labeling.point_at(1)
    assert ctx.phi.perm.apply(p1) == p1
    # parity witness exists iff a generator is odd, and is that generator
    if ctx.parity_witness is not None:
        assert ctx.parity_witness.perm.parity() == 1


def test_base_cycle_labels_cover_origin(ctx20):
    # the base cycle always uses labels (1, 2, x): label re-anchoring moved
    # the origin onto it rather than paying extra conjugation
    ctx = ctx20
    lab = ctx.labeling
    assert lab.label_of(lab.point_at(1)) == 1
    assert set(ctx.base.perm.support()) == {
        lab.point_at(1),
        lab.point_at(2),
        lab.point_at(ctx.x),
    }


def test_build_3cycle_routes_agree(ctx20):
    ctx = ctx20
    l = ctx.cycle_length
    rng = np.random.default_rng(5)
    for _ in range(12):
        r, s, t = (int(x) + 1 for x in rng.choice(l, size=3, replace=False))
        pool = build_3cycle(ctx, r, s, t)
        phi = build_3cycle_via_phi(ctx, r, s, t)
        want = Permutation.from_cycles(
            ctx.degree,
            [(ctx.labeling.point_at(r), ctx.labeling.point_at(s), ctx.labeling.point_at(t))],
        )
        assert pool.perm == want and phi.perm == want
        assert evaluate(pool.word, ctx.g, ctx.h) == want
        assert evaluate(phi.word, ctx.g, ctx.h) == want


def test_build_3cycle_rejects_repeated_labels(ctx20):
    with pytest.raises(ValueError):
        build_3cycle(ctx20, 1, 1, 2)


def test_synthesize_identity_is_empty(ctx20):
    w = synthesize(ctx20, Permutation.identity(20))
    assert isinstance(w, Cat) and expanded_length(w) == 0


def test_synthesize_exact_and_within_budget(ctx20):
    ctx = ctx20
    n = 20
    budget = 10 * n * n * math.log2(n) ** 3
    rng = np.random.default_rng(77)
    targets = [random_even(n, rng) for _ in range(4)]
    targets += [random_uniform(n, rng) for _ in range(4)]
    for target in targets:
        if target.parity() == 1 and ctx.parity_witness is None:
            continue
        w = synthesize(ctx, target)
        assert evaluate(w, ctx.g, ctx.h) == target
        assert expanded_length(w) <= budget
        # words are DAGs: huge expansion, small structure
        assert node_count(w) < 3000


def test_synthesize_odd_target_needs_witness():
    rng = np.random.default_rng(2)
    while True:
        g, h = random_even(16, rng), random_even(16, rng)
        try:
            ctx = prepare_context(g, h, rng)
            break
        except Exception:
            continue
    assert ctx.parity_witness is None
    odd = Permutation.transposition(16, 1, 2)
    with pytest.raises(ValueError):
        synthesize(ctx, odd)


def test_synthesize_degree_mismatch(ctx20):
    with pytest.raises(ValueError):
        synthesize(ctx20, Permutation.identity(19))


def test_synthesize_off_cycle_support_via_relocation(ctx20):
    # a 3-cycle touching points outside the distinguished cycle forces
    # the conjugating-walk relocation path
    ctx = ctx20
    outside = sorted(set(range(1, 21)) - set(ctx.labeling.points))
    if not outside:
        pytest.skip("cycle covers every point for this seed")
    a = outside[0]
    b, c = [p for p in ctx.labeling.points[:2]]
    target = Permutation.from_cycles(20, [(a, b, c)])
    w = synthesize(ctx, target)
    assert evaluate(w, ctx.g, ctx.h) == target
