"""Full-range BT.601 RGB <-> YCbCr conversion and the 128 level shift.

Planes stay float64 end to end; nothing is rounded until the final
conversion back to 8-bit RGB.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .io import RgbImage

__all__ = ["YccPlanes", "rgb_to_ycc", "ycc_to_rgb", "level_shift", "unshift", "LevelShiftError"]

RGB_TO_YCC = np.array(
    [
        [0.299, 0.587, 0.114],
        [-0.168736, -0.331264, 0.5],
        [0.5, -0.418688, -0.081312],
    ],
    dtype=np.float64,
)
# exact inverse so the real-valued chain is an identity up to float error
YCC_TO_RGB = np.linalg.inv(RGB_TO_YCC)
_OFFSET = np.array([0.0, 128.0, 128.0])

SHIFT = 128.0


class LevelShiftError(RuntimeError):
    """Level shift applied in the wrong direction."""


@dataclass(frozen=True)
class YccPlanes:
    """Full-resolution Y, Cb, Cr planes stacked as a (3, H, W) float64 array."""

    planes: np.ndarray
    shifted: bool = False

    @property
    def height(self) -> int:
        return self.planes.shape[1]

    @property
    def width(self) -> int:
        return self.planes.shape[2]

    @property
    def y(self):
        return self.planes[0]

    @property
    def cb(self):
        return self.planes[1]

    @property
    def cr(self):
        return self.planes[2]


def rgb_to_ycc_array(rgb: np.ndarray) -> np.ndarray:
    """(..., 3) RGB array -> (..., 3) YCbCr float64, unshifted, unclamped."""
    return np.asarray(rgb, dtype=np.float64) @ RGB_TO_YCC.T + _OFFSET


def ycc_to_rgb_array(ycc: np.ndarray) -> np.ndarray:
    """(..., 3) YCbCr -> (..., 3) real-valued RGB (no rounding or clamping)."""
    return (np.asarray(ycc, dtype=np.float64) - _OFFSET) @ YCC_TO_RGB.T


def rgb_to_ycc(img: RgbImage) -> YccPlanes:
    ycc = rgb_to_ycc_array(img.to_array())
    return YccPlanes(np.ascontiguousarray(np.moveaxis(ycc, -1, 0)), shifted=False)


def ycc_to_rgb(planes: YccPlanes) -> RgbImage:
    if planes.shifted:
        raise LevelShiftError("unshift the planes before converting back to RGB")
    rgb = ycc_to_rgb_array(np.moveaxis(planes.planes, 0, -1))
    return RgbImage.from_array(to_uint8(rgb))


def to_uint8(x: np.ndarray) -> np.ndarray:
    return np.clip(np.rint(x), 0, 255).astype(np.uint8)


def level_shift(planes: YccPlanes) -> YccPlanes:
    if planes.shifted:
        raise LevelShiftError("planes are already level-shifted")
    return replace(planes, planes=planes.planes - SHIFT, shifted=True)


def unshift(planes: YccPlanes) -> YccPlanes:
    if not planes.shifted:
        raise LevelShiftError("planes are not level-shifted")
    return replace(planes, planes=planes.planes + SHIFT, shifted=False)
