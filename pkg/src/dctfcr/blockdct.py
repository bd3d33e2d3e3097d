"""8x8 block partitioning and the orthonormal 2-D type-II DCT.

Blocks are indexed ``block[x, y]`` in the spatial domain and
``block[u, v]`` in the frequency domain, with ``u`` pairing with ``x``
(row) and ``v`` with ``y`` (column).
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .colorspace import YccPlanes

__all__ = [
    "BLOCK",
    "DCT_MATRIX",
    "CoeffPlanes",
    "DomainError",
    "forward_dct",
    "inverse_dct",
    "partition",
    "reassemble",
    "planes_to_blocks",
    "blocks_to_planes",
    "transform",
    "inverse_transform",
]

BLOCK = 8


def _dct_matrix(n: int = BLOCK) -> np.ndarray:
    k = np.arange(n)[:, None]
    x = np.arange(n)[None, :]
    alpha = np.where(k == 0, 1.0 / np.sqrt(2.0), 1.0)
    return alpha * np.sqrt(2.0 / n) * np.cos((2 * x + 1) * k * np.pi / (2 * n))


# C[u, x] = (alpha_u / 2) cos((2x + 1) u pi / 16); G = C g C^T
DCT_MATRIX = _dct_matrix()
DCT_MATRIX.setflags(write=False)


class DomainError(ValueError):
    """Operation applied to coefficients in the wrong domain."""


def forward_dct(blocks) -> np.ndarray:
    """DCT of one (8, 8) block or a stack (..., 8, 8) of them."""
    g = np.asarray(blocks, dtype=np.float64)
    _check_block_shape(g)
    return DCT_MATRIX @ g @ DCT_MATRIX.T


def inverse_dct(coeffs) -> np.ndarray:
    G = np.asarray(coeffs, dtype=np.float64)
    _check_block_shape(G)
    return DCT_MATRIX.T @ G @ DCT_MATRIX


def _check_block_shape(a):
    if a.shape[-2:] != (BLOCK, BLOCK):
        raise ValueError(f"expected trailing block shape (8, 8), got {a.shape}")


def grid_shape(height: int, width: int) -> tuple:
    return (-(-height // BLOCK), -(-width // BLOCK))


def partition(plane) -> np.ndarray:
    """Split an (H, W) plane into a (H/8, W/8, 8, 8) block grid.

    Sizes that are not multiples of 8 are padded by edge replication.
    """
    plane = np.asarray(plane)
    if plane.ndim != 2 or min(plane.shape) < 1:
        raise ValueError(f"expected a non-empty 2-D plane, got shape {plane.shape}")
    h, w = plane.shape
    by, bx = grid_shape(h, w)
    pad = ((0, by * BLOCK - h), (0, bx * BLOCK - w))
    if any(p for _, p in pad):
        plane = np.pad(plane, pad, mode="edge")
    return plane.reshape(by, BLOCK, bx, BLOCK).swapaxes(1, 2).copy()


def reassemble(grid, height: int, width: int) -> np.ndarray:
    """Inverse of :func:`partition`; padding is cropped away."""
    grid = np.asarray(grid)
    by, bx = grid.shape[:2]
    if grid.shape[2:] != (BLOCK, BLOCK):
        raise ValueError(f"expected (by, bx, 8, 8) grid, got {grid.shape}")
    if (by, bx) != grid_shape(height, width):
        raise ValueError(f"grid {by}x{bx} does not cover a {height}x{width} plane")
    plane = grid.swapaxes(1, 2).reshape(by * BLOCK, bx * BLOCK)
    return plane[:height, :width].copy()


@dataclass(frozen=True)
class CoeffPlanes:
    """Per-channel grids of 8x8 blocks.

    Attributes
    ----------
    blocks : ndarray of shape (n_channels, blocks_y, blocks_x, 8, 8)
        float64 for real values, int32 for quantized integers.
    height, width : int
        Original plane size before padding.
    domain : {"spatial", "frequency"}
    qf : int
        Quality factor the values were quantized with; 0 if real-valued.
    """

    blocks: np.ndarray
    height: int
    width: int
    domain: str = "frequency"
    qf: int = 0

    def __post_init__(self):
        if self.blocks.ndim != 5 or self.blocks.shape[3:] != (BLOCK, BLOCK):
            raise ValueError(f"blocks must be (C, by, bx, 8, 8), got {self.blocks.shape}")
        if self.blocks.shape[1:3] != grid_shape(self.height, self.width):
            raise ValueError(
                f"block grid {self.blocks.shape[1:3]} inconsistent with "
                f"{self.height}x{self.width}"
            )
        if self.domain not in ("spatial", "frequency"):
            raise ValueError(f"unknown domain {self.domain!r}")

    @property
    def n_channels(self) -> int:
        return self.blocks.shape[0]

    @property
    def grid(self) -> tuple:
        return self.blocks.shape[1:3]

    @property
    def quantized(self) -> bool:
        return self.qf > 0

    def require(self, domain: str) -> None:
        if self.domain != domain:
            raise DomainError(f"expected {domain}-domain coefficients, got {self.domain}")


def planes_to_blocks(planes: YccPlanes) -> CoeffPlanes:
    """Partition each plane of a level-shifted YccPlanes (spatial domain)."""
    blocks = np.stack([partition(p) for p in planes.planes])
    return CoeffPlanes(blocks, planes.height, planes.width, domain="spatial")


def blocks_to_planes(coeffs: CoeffPlanes) -> YccPlanes:
    coeffs.require("spatial")
    if coeffs.n_channels != 3:
        raise ValueError(f"need 3 channels to rebuild YCbCr planes, got {coeffs.n_channels}")
    planes = np.stack([reassemble(g, coeffs.height, coeffs.width) for g in coeffs.blocks])
    return YccPlanes(planes.astype(np.float64), shifted=True)


def transform(coeffs: CoeffPlanes) -> CoeffPlanes:
    coeffs.require("spatial")
    return replace(coeffs, blocks=forward_dct(coeffs.blocks), domain="frequency")


def inverse_transform(coeffs: CoeffPlanes) -> CoeffPlanes:
    coeffs.require("frequency")
    if coeffs.quantized:
        raise DomainError("dequantize coefficients before the inverse DCT")
    return replace(coeffs, blocks=inverse_dct(coeffs.blocks), domain="spatial")
