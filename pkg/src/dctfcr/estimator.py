"""scikit-learn transformers over batches of RGB images.

Input ``X`` is a uint8 array of shape (n_samples, H, W, 3), or a single
(H, W, 3) image.  All images in a batch share one size.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .blockdct import planes_to_blocks, transform
from .colorspace import level_shift, rgb_to_ycc
from .fcr import channel_names
from .io import RgbImage, TensorFile
from .pipeline import PipelineConfig, decode_tensor, encode_fcr
from .select import SelectionSpec, condense_nonfcr, make_selection, resolve_preset

__all__ = ["check_images", "resolve_selection", "DCTFeatureTransformer", "CondensedDCTTransformer"]


def check_images(X, *, allow_single: bool = True) -> np.ndarray:
    """Validate an image batch and return it as (n, H, W, 3) uint8."""
    X = np.asarray(X)
    if X.ndim == 3 and allow_single:
        X = X[None]
    if X.ndim != 4 or X.shape[-1] != 3:
        raise ValueError(f"expected images of shape (n, H, W, 3), got {X.shape}")
    if X.shape[0] == 0 or X.shape[1] == 0 or X.shape[2] == 0:
        raise ValueError(f"empty image batch {X.shape}")
    if X.dtype != np.uint8:
        if not np.issubdtype(X.dtype, np.number):
            raise ValueError(f"non-numeric image dtype {X.dtype}")
        if np.any((X < 0) | (X > 255)) or np.any(X != np.round(X)):
            raise ValueError("image values must be integers in [0, 255]")
        X = X.astype(np.uint8)
    return X


def resolve_selection(selection, square: bool = False) -> SelectionSpec:
    """Accept a preset name, an (nY, nCb, nCr) triple, a SelectionSpec or None."""
    if selection is None:
        return resolve_preset("DCT-EDANet")
    if isinstance(selection, SelectionSpec):
        return selection
    if isinstance(selection, str):
        return resolve_preset(selection)
    return make_selection(*selection, square=square)


class DCTFeatureTransformer(TransformerMixin, BaseEstimator):
    """Images -> rearranged DCT tensors of shape (n, H/8, W/8, C).

    Parameters
    ----------
    quality_factor : int or None
        Quantize with this quality factor; None keeps real coefficients.
    selection : str, tuple or None
        Table preset name such as ``"M-36-16-16"`` or ``(nY, nCb, nCr)``.
        None keeps all 192 channels.
    square : bool
        Select top-left k x k sub-bands instead of zigzag prefixes.
    dequantize : bool
        Multiply quantized integers back by the quantization matrix.
    scale : float
        Multiplier applied to real-valued outputs.

    Attributes
    ----------
    selection_ : SelectionSpec
    channels_ : ndarray
        Indices into the 192-channel layout that the output keeps.
    n_features_out_ : int
    image_shape_ : tuple
        (H, W) seen in ``fit``; ``transform`` requires the same size.
    """

    def __init__(self, quality_factor=None, selection=None, square=False,
                 dequantize=False, scale=1.0):
        self.quality_factor = quality_factor
        self.selection = selection
        self.square = square
        self.dequantize = dequantize
        self.scale = scale

    def _config(self) -> PipelineConfig:
        return PipelineConfig(
            quality_factor=self.quality_factor,
            selection=self.selection_,
            dequantize=self.dequantize,
            scale=self.scale if (self.quality_factor is None or self.dequantize) else 1.0,
        )

    def fit(self, X, y=None):
        X = check_images(X)
        self.selection_ = resolve_selection(self.selection, self.square)
        self.config_ = self._config()
        self.channels_ = self.selection_.channels
        self.n_features_out_ = self.selection_.total
        self.image_shape_ = X.shape[1:3]
        return self

    def transform(self, X):
        check_is_fitted(self, "config_")
        X = check_images(X)
        if X.shape[1:3] != self.image_shape_:
            raise ValueError(f"fitted on {self.image_shape_} images, got {X.shape[1:3]}")
        out = [encode_fcr(RgbImage.from_array(img), self.config_).data for img in X]
        out = np.stack(out)
        if self.config_.integer_output:
            return out.astype(np.int32)
        return out * self.config_.scale

    def inverse_transform(self, X):
        """Rebuild uint8 RGB images; dropped sub-bands are treated as zero."""
        check_is_fitted(self, "config_")
        X = np.asarray(X)
        if X.ndim == 3:
            X = X[None]
        h, w = self.image_shape_
        qf = self.quality_factor or 0
        images = []
        for t in X:
            if self.config_.integer_output:
                data = t.astype(np.int16)
            else:
                data = (t / self.config_.scale).astype(np.float32)
            tf = TensorFile(data=data, qf=qf, selection=self.selection_.counts,
                            height=h, width=w, ordering=self.selection_.ordering)
            images.append(decode_tensor(tf, zero_fill=True).to_array())
        return np.stack(images)

    def get_feature_names_out(self, input_features=None):
        check_is_fitted(self, "channels_")
        names = np.array(channel_names(3), dtype=object)
        return names[self.channels_]


class CondensedDCTTransformer(TransformerMixin, BaseEstimator):
    """Images -> non-rearranged condensed DCT layout (n, H*k/8, W*k/8, 3).

    Each 8x8 block's top-left ``k`` x ``k`` coefficients stay in place of the
    block.  ``k=8`` gives the plain block-DCT image.
    """

    def __init__(self, k=4):
        self.k = k

    def fit(self, X, y=None):
        check_images(X)
        if self.k not in (1, 2, 4, 8):
            raise ValueError(f"k must divide 8, got {self.k}")
        self.k_ = self.k
        return self

    def transform(self, X):
        check_is_fitted(self, "k_")
        X = check_images(X)
        out = []
        for img in X:
            coeffs = transform(planes_to_blocks(level_shift(rgb_to_ycc(RgbImage.from_array(img)))))
            out.append(condense_nonfcr(coeffs, self.k_))
        return np.stack(out)
