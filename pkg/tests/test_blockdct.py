import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from dctfcr.blockdct import (
    CoeffPlanes,
    DomainError,
    blocks_to_planes,
    forward_dct,
    grid_shape,
    inverse_dct,
    inverse_transform,
    partition,
    planes_to_blocks,
    reassemble,
    transform,
)
from dctfcr.colorspace import YccPlanes

from conftest import naive_dct, naive_dct_kernel

blocks8 = arrays(np.float64, (8, 8), elements=st.floats(-128, 127))


def test_zero_block():
    assert np.all(forward_dct(np.zeros((8, 8))) == 0)
    assert np.all(inverse_dct(np.zeros((8, 8))) == 0)


def test_constant_block():
    G = forward_dct(np.full((8, 8), 100.0))
    assert G[0, 0] == pytest.approx(800.0, abs=1e-9)
    G[0, 0] = 0
    assert np.abs(G).max() < 1e-9


def test_inverse_of_dc_only():
    G = np.zeros((8, 8))
    G[0, 0] = 800.0
    np.testing.assert_allclose(inverse_dct(G), 100.0, atol=1e-9)


def test_matches_naive_double_sum(rng):
    for _ in range(5):
        g = rng.uniform(-128, 127, size=(8, 8))
        np.testing.assert_allclose(forward_dct(g), naive_dct(g.tolist()), atol=1e-9, rtol=0)


def test_vectorized_kernel_agrees_with_loop_oracle(rng):
    g = rng.uniform(-128, 127, size=(8, 8))
    via_kernel = np.einsum("uvxy,xy->uv", naive_dct_kernel(), g)
    np.testing.assert_allclose(via_kernel, naive_dct(g.tolist()), atol=1e-10)


def test_random_round_trip(rng):
    g = rng.uniform(-128, 127, size=(10_000, 8, 8))
    assert np.abs(inverse_dct(forward_dct(g)) - g).max() < 1e-9


@given(blocks8)
def test_parseval(g):
    G = forward_dct(g)
    e = np.sum(g * g)
    assert abs(np.sum(G * G) - e) <= 1e-9 * max(e, 1.0)


@given(blocks8)
def test_dc_is_eight_times_mean(g):
    assert abs(forward_dct(g)[0, 0] - 8 * g.mean()) < 1e-9


@settings(max_examples=50)
@given(blocks8, blocks8, st.floats(-4, 4))
def test_linearity(b1, b2, a):
    lhs = forward_dct(a * b1 + b2)
    rhs = a * forward_dct(b1) + forward_dct(b2)
    assert np.abs(lhs - rhs).max() < 1e-9


def test_bad_block_shape():
    with pytest.raises(ValueError):
        forward_dct(np.zeros((8, 7)))


@pytest.mark.parametrize("h, w, grid", [
    (16, 16, (2, 2)),
    (512, 1024, (64, 128)),
    (9, 9, (2, 2)),
    (1, 1, (1, 1)),
])
def test_partition_grid(h, w, grid):
    assert partition(np.zeros((h, w))).shape == grid + (8, 8)
    assert grid_shape(h, w) == grid


def test_partition_block_contents():
    plane = np.arange(16 * 16, dtype=float).reshape(16, 16)
    grid = partition(plane)
    np.testing.assert_array_equal(grid[1, 0], plane[8:16, 0:8])
    np.testing.assert_array_equal(grid[0, 1], plane[0:8, 8:16])


def test_edge_replication_padding():
    plane = np.arange(81, dtype=float).reshape(9, 9)
    grid = partition(plane)
    padded = grid.swapaxes(1, 2).reshape(16, 16)
    np.testing.assert_array_equal(padded[:9, :9], plane)
    np.testing.assert_array_equal(padded[9:, :9], np.broadcast_to(plane[8], (7, 9)))
    np.testing.assert_array_equal(padded[:9, 9:], np.broadcast_to(plane[:, 8:9], (9, 7)))
    np.testing.assert_array_equal(reassemble(grid, 9, 9), plane)


@given(st.integers(1, 40), st.integers(1, 40))
def test_reassemble_partition_identity(h, w):
    plane = np.random.default_rng(h * 100 + w).normal(size=(h, w))
    np.testing.assert_array_equal(reassemble(partition(plane), h, w), plane)


def test_coeff_planes_transform_round_trip(rng):
    planes = YccPlanes(rng.uniform(-128, 127, size=(3, 20, 27)), shifted=True)
    spatial = planes_to_blocks(planes)
    assert spatial.blocks.shape == (3, 3, 4, 8, 8)
    freq = transform(spatial)
    assert freq.domain == "frequency"
    back = blocks_to_planes(inverse_transform(freq))
    assert np.abs(back.planes - planes.planes).max() < 1e-9


def test_domain_checks(rng):
    spatial = CoeffPlanes(np.zeros((3, 1, 1, 8, 8)), 8, 8, domain="spatial")
    with pytest.raises(DomainError):
        inverse_transform(spatial)
    with pytest.raises(DomainError):
        transform(transform(spatial))
    with pytest.raises(ValueError):
        CoeffPlanes(np.zeros((3, 2, 1, 8, 8)), 8, 8)
