"""End-to-end encode/decode between RGB images and FCRT tensors."""

from __future__ import annotations

import json
from dataclasses import dataclass, replace

import numpy as np

from . import io
from .blockdct import blocks_to_planes, inverse_transform, planes_to_blocks, transform
from .colorspace import level_shift, rgb_to_ycc, unshift, ycc_to_rgb
from .fcr import FcrTensor, fcr, inverse_fcr
from .io import RgbImage, TensorFile
from .quant import build_qmatrix, dequantize, quantize
from .select import PRESETS, SelectionSpec, apply_selection, make_selection, resolve_preset

__all__ = [
    "PipelineConfig",
    "encode_image",
    "encode_fcr",
    "decode_tensor",
    "channel_energy",
    "psnr",
    "load_config",
]

FULL = PRESETS["DCT-EDANet"]


@dataclass(frozen=True)
class PipelineConfig:
    """Encode settings.

    ``dtype`` is ``"auto"``, ``"f32"`` or ``"i16"``.  Auto stores quantized
    integers as i16 and everything else as f32.  Quantized integers must be
    i16 and dequantized or unquantized reals must be f32, so a reader can
    always tell which representation it is holding.
    """

    quality_factor: int | None = None
    selection: SelectionSpec = FULL
    dequantize: bool = False
    dtype: str = "auto"
    scale: float = 1.0

    def __post_init__(self):
        if self.quality_factor is not None:
            build_qmatrix(self.quality_factor)
        if self.dequantize and self.quality_factor is None:
            raise ValueError("dequantize requires a quality factor")
        if self.dtype not in ("auto", "f32", "i16"):
            raise ValueError(f"unknown dtype {self.dtype!r}")
        if self.dtype != "auto" and self.dtype != self._natural_dtype():
            raise ValueError(
                f"dtype {self.dtype} does not fit "
                + ("quantized integer" if self.integer_output else "real-valued")
                + " coefficients"
            )
        if self.integer_output and self.scale != 1.0:
            raise ValueError("scale only applies to real-valued output")
        if not self.scale > 0:
            raise ValueError(f"scale must be positive, got {self.scale}")

    @property
    def integer_output(self) -> bool:
        return self.quality_factor is not None and not self.dequantize

    def _natural_dtype(self) -> str:
        return "i16" if self.integer_output else "f32"

    @property
    def numpy_dtype(self):
        return np.int16 if self.integer_output else np.float32

    @classmethod
    def from_dict(cls, d: dict) -> "PipelineConfig":
        unknown = set(d) - {"quality_factor", "preset", "selection", "dequantize", "dtype", "scale"}
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        if "preset" in d and "selection" in d:
            raise ValueError("config may give preset or selection, not both")
        if "preset" in d:
            sel = resolve_preset(d["preset"])
        elif "selection" in d:
            sel = make_selection(*d["selection"])
        else:
            sel = FULL
        return cls(
            quality_factor=d.get("quality_factor"),
            selection=sel,
            dequantize=bool(d.get("dequantize", False)),
            dtype=d.get("dtype", "auto"),
            scale=float(d.get("scale", 1.0)),
        )


def load_config(path) -> dict:
    with open(path) as f:
        d = json.load(f)
    if not isinstance(d, dict):
        raise ValueError("config file must hold a JSON object")
    return d


def encode_fcr(img: RgbImage, config: PipelineConfig = PipelineConfig()) -> FcrTensor:
    """RGB -> YCbCr -> shift -> 8x8 DCT -> [quantize] -> [dequantize] -> FCR -> select."""
    coeffs = transform(planes_to_blocks(level_shift(rgb_to_ycc(img))))
    qf = 0
    if config.quality_factor is not None:
        spec = build_qmatrix(config.quality_factor)
        coeffs = quantize(coeffs, spec)
        qf = spec.qf
        if config.dequantize:
            coeffs = dequantize(coeffs, spec)
    t = replace(fcr(coeffs), qf=qf)
    if not config.selection.is_full or config.selection.square:
        t = apply_selection(t, config.selection)
    return t


def encode_image(img: RgbImage, config: PipelineConfig = PipelineConfig()) -> TensorFile:
    t = encode_fcr(img, config)
    data = t.data
    if config.scale != 1.0:
        data = data * config.scale
    return TensorFile(
        data=data.astype(config.numpy_dtype),
        qf=t.qf,
        selection=t.selection,
        height=img.height,
        width=img.width,
        ordering=t.ordering,
    )


def decode_tensor(tf: TensorFile, zero_fill: bool = False, scale: float = 1.0) -> RgbImage:
    """Invert :func:`encode_image` as far as the stored coefficients allow.

    Quantized integer tensors (i16 with qf > 0) are dequantized first;
    reduced selections need ``zero_fill``.
    """
    tf.validate()
    if tf.ordering not in (io.ORDER_ZIGZAG, io.ORDER_ZIGZAG_SQUARE):
        raise io.FormatError(f"cannot decode tensor with ordering tag {tf.ordering}")
    if tf.height < 1 or tf.width < 1:
        raise io.FormatError("tensor lacks original image dimensions")
    integer = tf.data.dtype == np.int16
    if integer and tf.qf == 0:
        raise io.FormatError("integer tensor without a quality factor")
    by, bx = -(-tf.height // 8), -(-tf.width // 8)
    if tf.data.shape[:2] != (by, bx):
        raise io.FormatError(
            f"tensor grid {tf.data.shape[:2]} does not match a {tf.height}x{tf.width} image"
        )
    data = tf.data.astype(np.float64)
    if not integer and scale != 1.0:
        data = data / scale
    selection = tuple(tf.selection) if any(tf.selection) else (64, 64, 64)
    t = FcrTensor(
        data, tf.height, tf.width,
        qf=tf.qf if integer else 0,
        selection=selection, ordering=tf.ordering,
    )
    coeffs = inverse_fcr(t, zero_fill=zero_fill)
    if coeffs.n_channels != 3:
        raise io.FormatError(f"need three planes to decode, got {coeffs.n_channels}")
    if integer:
        coeffs = dequantize(coeffs)
    planes = unshift(blocks_to_planes(inverse_transform(coeffs)))
    return ycc_to_rgb(planes)


def channel_energy(tf: TensorFile) -> np.ndarray:
    """Mean squared value of every channel, in channel order."""
    x = tf.data.astype(np.float64)
    return np.mean(x * x, axis=(0, 1))


def psnr(a: RgbImage, b: RgbImage) -> float:
    if (a.height, a.width) != (b.height, b.width):
        raise ValueError("images differ in size")
    diff = a.to_array().astype(np.float64) - b.to_array().astype(np.float64)
    mse = float(np.mean(diff * diff))
    if mse == 0:
        return float("inf")
    return 10.0 * np.log10(255.0 ** 2 / mse)
