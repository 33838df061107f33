"""Support shrinking: long-cycle extraction, commutator steps, budgets."""

import math

import numpy as np
import pytest

from permword import (
    BudgetExceededError,
    Permutation,
    ShrinkConfig,
    evaluate,
    expanded_length,
    find_long_cycle_element,
    random_even,
    random_uniform,
    shrink_support,
    word_length_budget,
)
from permword.shrink import commutator_step

from conftest import seeded_pair


def test_long_cycle_element_properties():
    for seed in range(5):
        g, h, rng = seeded_pair(30, seed)
        lc = find_long_cycle_element(g, h, rng)
        assert lc.length == len(lc.cycle)
        assert lc.length > 3 * 30 / 4
        assert evaluate(lc.word, g, h) == lc.perm
        assert not (lc.perm ** lc.length).is_identity()
        assert lc.cycle in lc.perm.cycles()


def test_infeasible_degrees_raise_up_front():
    for n in (3, 8, 10):
        g, h, rng = seeded_pair(n, 0)
        with pytest.raises(ValueError):
            find_long_cycle_element(g, h, rng)


def test_even_even_pairs_raise_below_fourteen():
    rng = np.random.default_rng(8)
    for n in (9, 12, 13, 15):
        g, h = random_even(n, rng), random_even(n, rng)
        with pytest.raises(ValueError):
            find_long_cycle_element(g, h, rng)
    # from 14 on (except 15) both-even pairs are feasible
    g, h = random_even(14, rng), random_even(14, rng)
    lc = find_long_cycle_element(g, h, rng)
    assert lc.length > 3 * 14 / 4


def test_odd_containing_pair_feasible_at_nine():
    rng = np.random.default_rng(1)
    while True:
        g, h = random_uniform(9, rng), random_uniform(9, rng)
        if not (g.is_even() and h.is_even()):
            break
    lc = find_long_cycle_element(g, h, rng)
    assert lc.length in (7, 8)  # the qualifying lengths at n = 9


def test_commutator_step_shrinks_or_keeps_support_structure():
    # seed 1 at n = 40 starts from support 7, inside the step's [4, n-1] domain
    g, h, rng = seeded_pair(40, 1)
    lc = find_long_cycle_element(g, h, rng)
    s = lc.element.pow(lc.length)
    assert s.perm.support_size() == 7
    k = math.ceil(40 * math.log(40))
    out = commutator_step(s, g, h, k, rng)
    assert evaluate(out.word, g, h) == out.perm
    assert not out.perm.is_identity()
    # [s, s^sigma] moves at most 3X points, X <= |supp(s)|
    assert out.perm.support_size() <= 3 * s.perm.support_size()


def test_commutator_step_rejects_tiny_support():
    g, h, rng = seeded_pair(40, 4)
    lc = find_long_cycle_element(g, h, rng)
    s = lc.element.pow(lc.length)
    assert s.perm.support_size() < 4
    with pytest.raises(ValueError):
        commutator_step(s, g, h, 50, rng)


@pytest.mark.parametrize("seed", range(6))
def test_shrink_support_end_to_end(seed):
    g, h, rng = seeded_pair(60, seed)
    res = shrink_support(g, h, rng)
    assert 1 <= res.element.support_size() <= 3
    assert evaluate(res.word, g, h) == res.element
    assert res.support_trace[-1] == res.element.support_size()
    assert len(res.trial_counts) == res.iterations
    assert expanded_length(res.word) <= word_length_budget(60, ShrinkConfig())


def test_shrink_respects_tiny_budget():
    # seed 1 at n = 60 needs at least one commutator iteration, whose word
    # cannot fit in a budget of a few symbols
    g, h, rng = seeded_pair(60, 1)
    tiny = ShrinkConfig(budget_coefficient=1e-4)
    with pytest.raises(BudgetExceededError):
        shrink_support(g, h, rng, tiny)


def test_budget_formula():
    cfg = ShrinkConfig()
    assert word_length_budget(100, cfg) == math.ceil(10 * 100 * math.log2(100) ** 3)
    assert word_length_budget(100, ShrinkConfig(budget_coefficient=1.0)) == math.ceil(
        100 * math.log2(100) ** 3
    )


def test_shrink_is_seed_stable():
    res_a = shrink_support(*seeded_pair(50, 9)[:2], np.random.default_rng(9))
    res_b = shrink_support(*seeded_pair(50, 9)[:2], np.random.default_rng(9))
    assert res_a.element == res_b.element
    assert res_a.support_trace == res_b.support_trace
