"""Backend lanes: the compiled extension and the pure numpy kernels must
agree bit for bit, since they share one accumulation order."""

import numpy as np
import pytest

from permword.kernels import BACKEND, adjacency_apply, backend, convolve_steps, pure, track_points

try:
    from permword import _ckernels
except ImportError:
    _ckernels = None

needs_c = pytest.mark.skipif(_ckernels is None, reason="compiled extension absent")


def random_inputs(seed):
    rng = np.random.default_rng(seed)
    n, T, B, k = 9, 5, 7, 20
    tables = np.stack([rng.permutation(n) for _ in range(T)]).astype(np.int32)
    symbols = rng.integers(0, T, size=(B, k))
    points = np.arange(n, dtype=np.int32)
    size, atoms = 60, 6
    idx = np.stack([rng.permutation(size) for _ in range(atoms)]).astype(np.int32)
    probs = rng.dirichlet(np.ones(atoms))
    dist = rng.dirichlet(np.ones(size))
    nbrs = np.stack([rng.permutation(size) for _ in range(4)]).astype(np.int32)
    f = rng.standard_normal(size)
    return tables, symbols, points, dist, idx, probs, nbrs, f


def test_backend_reports_active_lane():
    assert backend() == BACKEND
    assert BACKEND in ("c", "python")


@needs_c
@pytest.mark.parametrize("seed", [0, 1, 2])
def test_lanes_agree_bitwise(seed):
    tables, symbols, points, dist, idx, probs, nbrs, f = random_inputs(seed)
    assert np.array_equal(
        pure.track_points(tables, symbols, points),
        _ckernels.track_points(tables, symbols, points),
    )
    a = pure.convolve_steps(dist, idx, probs, 5)
    b = _ckernels.convolve_steps(dist, idx, probs, 5)
    assert np.array_equal(a, b)
    assert np.array_equal(pure.adjacency_apply(f, nbrs), _ckernels.adjacency_apply(f, nbrs))


def test_track_points_identity_and_composition():
    tables, symbols, points, *_ = random_inputs(3)
    out = track_points(tables, symbols, points)
    # row by row oracle
    for b in range(symbols.shape[0]):
        pos = points.copy()
        for s in symbols[b]:
            pos = tables[s][pos]
        assert np.array_equal(out[b], pos)


def test_convolve_steps_zero_steps_is_identity():
    _, _, _, dist, idx, probs, _, _ = random_inputs(4)
    assert np.array_equal(convolve_steps(dist, idx, probs, 0), dist)


def test_convolve_steps_preserves_mass():
    _, _, _, dist, idx, probs, _, _ = random_inputs(5)
    out = convolve_steps(dist, idx, probs, 11)
    assert abs(out.sum() - dist.sum()) < 1e-12


def test_adjacency_apply_matches_mean():
    *_, nbrs, f = random_inputs(6)
    out = adjacency_apply(f, nbrs)
    want = np.mean([f[nbrs[j]] for j in range(4)], axis=0)
    assert np.allclose(out, want, atol=1e-15)


def test_pure_lane_selectable_by_env(tmp_path):
    import subprocess
    import sys

    code = "from permword.kernels import BACKEND; print(BACKEND)"
    env_pure = {"PERMWORD_PURE": "1", "PATH": "/usr/bin:/bin"}
    out = subprocess.run(
        [sys.executable, "-c", code], capture_output=True, text=True, env=env_pure
    )
    assert out.stdout.strip() == "python"
