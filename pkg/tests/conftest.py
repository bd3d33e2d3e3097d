import math

import numpy as np
import pytest

from dctfcr.io import RgbImage


def naive_dct(g):
    """Direct double sum over one 8x8 block, straight from the DCT-II definition."""
    out = [[0.0] * 8 for _ in range(8)]
    for u in range(8):
        for v in range(8):
            au = 1 / math.sqrt(2) if u == 0 else 1.0
            av = 1 / math.sqrt(2) if v == 0 else 1.0
            s = 0.0
            for x in range(8):
                for y in range(8):
                    s += (g[x][y]
                          * math.cos((2 * x + 1) * u * math.pi / 16)
                          * math.cos((2 * y + 1) * v * math.pi / 16))
            out[u][v] = 0.25 * au * av * s
    return np.array(out)


def naive_dct_kernel():
    """(u, v, x, y) weights of the same double sum, for vectorized sweeps."""
    k = np.empty((8, 8, 8, 8))
    for u in range(8):
        for v in range(8):
            au = 1 / math.sqrt(2) if u == 0 else 1.0
            av = 1 / math.sqrt(2) if v == 0 else 1.0
            for x in range(8):
                for y in range(8):
                    k[u, v, x, y] = (0.25 * au * av
                                     * math.cos((2 * x + 1) * u * math.pi / 16)
                                     * math.cos((2 * y + 1) * v * math.pi / 16))
    return k


def synthetic_images(height=512, width=1024, seed=0):
    """Three deterministic test scenes: smooth gradients, blurred noise, hard edges."""
    rng = np.random.default_rng(seed)
    y, x = np.mgrid[0:height, 0:width].astype(np.float64)

    sky = np.stack([
        90 + 120 * y / height,
        140 + 60 * np.sin(x / 97.0),
        220 - 100 * y / height + 20 * np.cos((x + y) / 53.0),
    ], axis=-1)

    coarse = rng.uniform(0, 255, size=(height // 16 + 1, width // 16 + 1, 3))
    # bilinear upsample of the coarse noise
    fy, fx = y / 16.0, x / 16.0
    y0, x0 = np.floor(fy).astype(int), np.floor(fx).astype(int)
    y1, x1 = np.minimum(y0 + 1, coarse.shape[0] - 1), np.minimum(x0 + 1, coarse.shape[1] - 1)
    wy, wx = (fy - y0)[..., None], (fx - x0)[..., None]
    blobs = ((1 - wy) * (1 - wx) * coarse[y0, x0] + (1 - wy) * wx * coarse[y0, x1]
             + wy * (1 - wx) * coarse[y1, x0] + wy * wx * coarse[y1, x1])
    blobs += rng.normal(0, 6, size=blobs.shape)

    edges = np.zeros((height, width, 3))
    edges[..., 0] = np.where((x // 64 + y // 48) % 2 == 0, 230, 25)
    edges[..., 1] = np.where((x - width / 2) ** 2 + (y - height / 2) ** 2 < (height / 3) ** 2, 200, 40)
    edges[..., 2] = (x * 255 / width)
    edges += rng.normal(0, 10, size=edges.shape)

    return [RgbImage.from_array(np.clip(np.rint(a), 0, 255).astype(np.uint8))
            for a in (sky, blobs, edges)]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def scenes():
    return synthetic_images()


@pytest.fixture(scope="session")
def small_scenes():
    return synthetic_images(48, 72, seed=3)
