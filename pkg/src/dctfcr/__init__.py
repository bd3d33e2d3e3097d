"""JPEG-style DCT preprocessing for compressed-domain CNNs.

RGB images go through YCbCr conversion, 8x8 block DCT, optional
quality-factor quantization and frequency component rearrangement into
(h/8, w/8, 192) tensors, with low-frequency channel selection on top.
"""

from .blockdct import CoeffPlanes, forward_dct, inverse_dct, partition, reassemble
from .colorspace import YccPlanes, level_shift, rgb_to_ycc, unshift, ycc_to_rgb
from .fcr import FcrTensor, fcr, inverse_fcr, zig
from .io import RgbImage, TensorFile, read_ppm, read_tensor, write_ppm, write_tensor
from .quant import QuantSpec, build_qmatrix, dequantize_block, quantize_block
from .select import (
    SelectionSpec,
    apply_selection,
    condense_nonfcr,
    make_selection,
    preset_catalog,
)

__version__ = "0.1.0"
