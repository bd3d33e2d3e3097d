"""Low-frequency component selection over rearranged tensors."""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .blockdct import BLOCK, CoeffPlanes
from .fcr import N_FREQ, ZIGZAG_INDEX, FcrTensor
from .io import ORDER_ZIGZAG, ORDER_ZIGZAG_SQUARE

__all__ = [
    "SelectionSpec",
    "make_selection",
    "channel_indices",
    "apply_selection",
    "preset_catalog",
    "PRESETS",
    "resolve_preset",
    "parse_selection",
    "condense_nonfcr",
]


def _square_band(k: int) -> np.ndarray:
    """Zigzag channel indices covering the top-left k x k square."""
    u, v = np.meshgrid(np.arange(k), np.arange(k), indexing="ij")
    return np.sort(ZIGZAG_INDEX[(u * BLOCK + v).ravel()])


def channel_indices(n_y: int, n_cb: int, n_cr: int, square: bool = False) -> np.ndarray:
    """Indices into the 192-channel layout kept by a selection.

    By default each plane keeps its first ``n`` channels, i.e. the zigzag
    prefix.  With ``square=True`` each count must be a perfect square
    ``k*k`` and the plane keeps the top-left ``k x k`` sub-bands instead.
    """
    parts = []
    for plane, n in enumerate((n_y, n_cb, n_cr)):
        if square:
            k = int(round(n ** 0.5))
            if k * k != n:
                raise ValueError(f"square selection needs perfect-square counts, got {n}")
            band = _square_band(k)
        else:
            band = np.arange(n)
        parts.append(plane * N_FREQ + band)
    return np.concatenate(parts).astype(np.intp)


@dataclass(frozen=True)
class SelectionSpec:
    n_y: int
    n_cb: int
    n_cr: int
    name: str = ""
    square: bool = False

    @property
    def counts(self) -> tuple:
        return (self.n_y, self.n_cb, self.n_cr)

    @property
    def total(self) -> int:
        return self.n_y + self.n_cb + self.n_cr

    @property
    def channels(self) -> np.ndarray:
        return channel_indices(*self.counts, square=self.square)

    @property
    def is_full(self) -> bool:
        return self.counts == (64, 64, 64)

    @property
    def ordering(self) -> int:
        return ORDER_ZIGZAG_SQUARE if self.square else ORDER_ZIGZAG


def make_selection(n_y: int, n_cb: int, n_cr: int, name: str = "", square: bool = False) -> SelectionSpec:
    counts = (n_y, n_cb, n_cr)
    for n in counts:
        if isinstance(n, bool) or int(n) != n or not 0 <= n <= N_FREQ:
            raise ValueError(f"component counts must be integers in [0, 64], got {counts}")
    if sum(counts) < 1:
        raise ValueError("selection keeps no components")
    spec = SelectionSpec(int(n_y), int(n_cb), int(n_cr), name=name, square=square)
    spec.channels  # validates square counts
    return spec


def apply_selection(t: FcrTensor, spec: SelectionSpec) -> FcrTensor:
    """Copy the selected channels of a full 192-channel tensor."""
    if t.ordering != ORDER_ZIGZAG:
        raise ValueError(f"selection expects zigzag channel order, tensor has tag {t.ordering}")
    if t.n_channels != 3 * N_FREQ or not t.is_full:
        raise ValueError(f"selection needs a full 192-channel tensor, got {t.n_channels} channels")
    data = np.ascontiguousarray(t.data[..., spec.channels])
    return replace(t, data=data, selection=spec.counts, ordering=spec.ordering)


_PRESET_TABLE = [
    ("DCT-EDANet", 64, 64, 64),
    ("M-64-0-0", 64, 0, 0),
    ("M-49-9-9", 49, 9, 9),
    ("M-36-16-16", 36, 16, 16),
    ("M-25-25-25", 25, 25, 25),
    ("DCT-EDANet-1/4coef", 16, 16, 16),
    ("M-16-4-4", 16, 4, 4),
    ("M-16-1-1", 16, 1, 1),
    ("M-9-4-4", 9, 4, 4),
    ("M-0-0-16", 0, 0, 16),
]


def preset_catalog() -> list:
    """The ten named component-selection configurations, in table order."""
    return [make_selection(y, cb, cr, name=name) for name, y, cb, cr in _PRESET_TABLE]


PRESETS = {s.name: s for s in preset_catalog()}


def resolve_preset(name: str) -> SelectionSpec:
    try:
        return PRESETS[name]
    except KeyError:
        raise ValueError(f"unknown preset {name!r}; known: {', '.join(PRESETS)}") from None


def parse_selection(text: str, square: bool = False) -> SelectionSpec:
    """Parse ``"nY,nCb,nCr"``."""
    try:
        counts = [int(p) for p in text.split(",")]
    except ValueError:
        raise ValueError(f"bad selection {text!r}; expected nY,nCb,nCr") from None
    if len(counts) != 3:
        raise ValueError(f"bad selection {text!r}; expected nY,nCb,nCr")
    return make_selection(*counts, square=square)


def condense_nonfcr(coeffs: CoeffPlanes, k: int = 4) -> np.ndarray:
    """Keep each block's top-left k x k coefficients in place, without rearranging.

    Returns an array of shape (blocks_y*k, blocks_x*k, n_channels); for
    k=4 and an (h, w) image that is (h/2, w/2, 3).
    """
    coeffs.require("frequency")
    if k < 1 or BLOCK % k:
        raise ValueError(f"k must divide 8, got {k}")
    c, by, bx = coeffs.blocks.shape[:3]
    sub = coeffs.blocks[..., :k, :k]
    # (c, by, bx, k, k) -> (by, k, bx, k, c)
    return np.ascontiguousarray(sub.transpose(1, 3, 2, 4, 0).reshape(by * k, bx * k, c))
