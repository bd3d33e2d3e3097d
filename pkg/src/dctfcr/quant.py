"""Quality-factor quantization matrices and coefficient (de)quantization."""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .blockdct import CoeffPlanes, DomainError

__all__ = [
    "BASE_QMATRIX",
    "QuantSpec",
    "build_qmatrix",
    "quantize_block",
    "dequantize_block",
    "round_half_away",
    "quantize",
    "dequantize",
]

BASE_QMATRIX = np.array(
    [
        [16, 11, 10, 16, 24, 40, 51, 61],
        [12, 12, 14, 19, 26, 58, 60, 55],
        [14, 13, 16, 24, 40, 57, 69, 56],
        [14, 17, 22, 29, 51, 87, 80, 62],
        [18, 22, 37, 56, 68, 109, 103, 77],
        [24, 35, 55, 64, 81, 104, 113, 92],
        [49, 64, 78, 87, 103, 121, 120, 101],
        [72, 92, 95, 98, 112, 100, 103, 99],
    ],
    dtype=np.int64,
)
BASE_QMATRIX.setflags(write=False)


@dataclass(frozen=True)
class QuantSpec:
    qf: int
    matrix: np.ndarray

    def __str__(self):
        return "\n".join(" ".join(str(int(v)) for v in row) for row in self.matrix)


def build_qmatrix(qf: int) -> QuantSpec:
    """Scale the base table by quality factor ``qf`` in [1, 100].

    The multiplier is ``5000 / qf`` below 50 and ``200 - 2 qf`` otherwise.
    Everything is done in exact integer arithmetic so ``floor`` never sees a
    float rounding error.
    """
    if isinstance(qf, bool) or int(qf) != qf:
        raise ValueError(f"quality factor must be an integer, got {qf!r}")
    qf = int(qf)
    if not 1 <= qf <= 100:
        raise ValueError(f"quality factor must be in [1, 100], got {qf}")
    if qf < 50:
        # floor((Qb * 5000/qf + 50) / 100) == (Qb*5000 + 50 qf) // (100 qf)
        q = (BASE_QMATRIX * 5000 + 50 * qf) // (100 * qf)
    else:
        m = 200 - 2 * qf
        q = (BASE_QMATRIX * m + 50) // 100
    q = np.where(q == 0, 1, q).astype(np.int64)
    q.setflags(write=False)
    return QuantSpec(qf, q)


def round_half_away(x):
    x = np.asarray(x, dtype=np.float64)
    return np.copysign(np.floor(np.abs(x) + 0.5), x)


def quantize_block(block, spec: QuantSpec) -> np.ndarray:
    """Quantize (..., 8, 8) real coefficients to integers."""
    return round_half_away(np.asarray(block, dtype=np.float64) / spec.matrix).astype(np.int32)


def dequantize_block(block, spec: QuantSpec) -> np.ndarray:
    return np.asarray(block, dtype=np.float64) * spec.matrix


def quantize(coeffs: CoeffPlanes, spec: QuantSpec) -> CoeffPlanes:
    """Quantize every block of every channel with the same matrix."""
    coeffs.require("frequency")
    if coeffs.quantized:
        raise DomainError(f"coefficients already quantized at qf={coeffs.qf}")
    return replace(coeffs, blocks=quantize_block(coeffs.blocks, spec), qf=spec.qf)


def dequantize(coeffs: CoeffPlanes, spec: QuantSpec | None = None) -> CoeffPlanes:
    coeffs.require("frequency")
    if not coeffs.quantized:
        raise DomainError("coefficients are not quantized")
    spec = spec or build_qmatrix(coeffs.qf)
    if spec.qf != coeffs.qf:
        raise ValueError(f"quant spec qf={spec.qf} does not match coefficients qf={coeffs.qf}")
    return replace(coeffs, blocks=dequantize_block(coeffs.blocks, spec), qf=0)
