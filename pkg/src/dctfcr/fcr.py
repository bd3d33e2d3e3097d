"""Frequency component rearrangement.

Each 8x8 coefficient block becomes a 64-long channel vector at the block's
spatial position, so an (h, w) plane becomes an (h/8, w/8, 64) tensor.
Frequencies map to channels in JPEG zigzag order and channels are grouped
plane-major: all Y, then Cb, then Cr.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .blockdct import BLOCK, CoeffPlanes, DomainError
from .io import ORDER_ZIGZAG, ORDER_ZIGZAG_SQUARE

__all__ = [
    "ZIGZAG",
    "ZIGZAG_INDEX",
    "zigzag_order",
    "zig",
    "FcrTensor",
    "fcr",
    "inverse_fcr",
]

N_FREQ = BLOCK * BLOCK
PLANE_NAMES = ("Y", "Cb", "Cr")


def zigzag_order(n: int = BLOCK) -> list:
    """(u, v) positions of an n x n block in zigzag scan order."""
    order = []
    for s in range(2 * n - 1):
        us = range(max(0, s - n + 1), min(s, n - 1) + 1)
        if s % 2 == 0:
            us = reversed(us)
        order.extend((u, s - u) for u in us)
    return order


# ZIGZAG[k] = raster index u*8+v of the k-th scanned coefficient
ZIGZAG = np.array([u * BLOCK + v for u, v in zigzag_order()], dtype=np.intp)
# ZIGZAG_INDEX[u*8+v] = scan position of (u, v)
ZIGZAG_INDEX = np.argsort(ZIGZAG)
ZIGZAG.setflags(write=False)
ZIGZAG_INDEX.setflags(write=False)


def zig(u: int, v: int) -> int:
    return int(ZIGZAG_INDEX[u * BLOCK + v])


@dataclass(frozen=True)
class FcrTensor:
    """Rearranged coefficients of shape (blocks_y, blocks_x, C).

    ``selection`` is (nY, nCb, nCr) describing which channels survive; for
    an unselected three-plane tensor it is (64, 64, 64).
    """

    data: np.ndarray
    height: int
    width: int
    qf: int = 0
    selection: tuple = (64, 64, 64)
    ordering: int = ORDER_ZIGZAG

    @property
    def shape(self):
        return self.data.shape

    @property
    def n_channels(self) -> int:
        return self.data.shape[2]

    @property
    def is_full(self) -> bool:
        n = self.n_channels
        return n % N_FREQ == 0 and tuple(self.selection) == tuple(
            [64] * (n // N_FREQ) + [0] * (3 - n // N_FREQ)
        )


def fcr(coeffs: CoeffPlanes) -> FcrTensor:
    """Rearrange frequency-domain blocks into a channel-last tensor.

    ``out[by, bx, c*64 + zig(u, v)] == coeffs.blocks[c, by, bx, u, v]``.
    """
    coeffs.require("frequency")
    c, by, bx = coeffs.blocks.shape[:3]
    if not 1 <= c <= 3:
        raise ValueError(f"expected 1 to 3 channels, got {c}")
    flat = coeffs.blocks.reshape(c, by, bx, N_FREQ)[..., ZIGZAG]
    data = np.ascontiguousarray(flat.transpose(1, 2, 0, 3).reshape(by, bx, c * N_FREQ))
    selection = tuple([64] * c + [0] * (3 - c))
    return FcrTensor(data, coeffs.height, coeffs.width, qf=coeffs.qf, selection=selection)


def inverse_fcr(t: FcrTensor, zero_fill: bool = False) -> CoeffPlanes:
    """Rebuild per-channel block grids from a rearranged tensor.

    Reduced (selected) tensors need ``zero_fill=True``; missing sub-bands
    come back as zeros.  Output always has 3 channels for a reduced tensor.
    """
    if t.ordering not in (ORDER_ZIGZAG, ORDER_ZIGZAG_SQUARE):
        raise DomainError(f"unsupported channel ordering tag {t.ordering}")
    data = t.data
    by, bx, n = data.shape
    if t.is_full:
        nplanes = n // N_FREQ
        full = data
    else:
        if not zero_fill:
            raise ValueError(
                f"tensor holds a {n}-channel selection {tuple(t.selection)}; "
                "pass zero_fill=True to rebuild the full coefficient set"
            )
        from .select import channel_indices

        idx = channel_indices(*t.selection, square=t.ordering == ORDER_ZIGZAG_SQUARE)
        if len(idx) != n:
            raise ValueError(f"selection {tuple(t.selection)} does not match {n} channels")
        nplanes = 3
        full = np.zeros((by, bx, 3 * N_FREQ), dtype=data.dtype)
        full[..., idx] = data
    flat = full.reshape(by, bx, nplanes, N_FREQ).transpose(2, 0, 1, 3)[..., ZIGZAG_INDEX]
    blocks = np.ascontiguousarray(flat.reshape(nplanes, by, bx, BLOCK, BLOCK))
    return CoeffPlanes(blocks, t.height, t.width, domain="frequency", qf=t.qf)


def channel_names(n_planes: int = 3) -> list:
    return [f"{PLANE_NAMES[p]}_{k}" for p in range(n_planes) for k in range(N_FREQ)]
