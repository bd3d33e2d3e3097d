"""Raster and tensor file I/O.

Two formats live here: binary PPM (P6, 8-bit) for images and the ``FCRT``
container for coefficient tensors.  ``FCRT`` layout, little-endian::

    magic    4s   b"FCRT"
    version  u8
    dtype    u8   1 = f32, 2 = i16
    dims     3*u32  (d0, d1, d2), row-major, channel-last
    qf       u16  0 = unquantized
    nY nCb nCr  3*u8
    height width  2*u32  original image size
    ordering u8
    payload  d0*d1*d2 elements

The header is 32 bytes; there is no padding anywhere.
"""

from __future__ import annotations

import os
import re
import struct
import tempfile
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "FormatError",
    "RgbImage",
    "TensorFile",
    "read_ppm",
    "write_ppm",
    "load_ppm",
    "save_ppm",
    "tensor_to_bytes",
    "tensor_from_bytes",
    "write_tensor",
    "read_tensor",
    "atomic_write_bytes",
    "ORDER_NONE",
    "ORDER_ZIGZAG",
    "ORDER_ZIGZAG_SQUARE",
    "ORDER_CONDENSED",
]

MAGIC = b"FCRT"
VERSION = 1

DTYPE_F32 = 1
DTYPE_I16 = 2
_DTYPES = {DTYPE_F32: np.dtype("<f4"), DTYPE_I16: np.dtype("<i2")}
_DTYPE_NAMES = {"f32": DTYPE_F32, "i16": DTYPE_I16}

# ordering tags
ORDER_NONE = 0
ORDER_ZIGZAG = 1          # zigzag channel order, prefix selection
ORDER_ZIGZAG_SQUARE = 2   # zigzag channel order, top-left k x k selection
ORDER_CONDENSED = 3       # non-rearranged condensed spatial layout

_HEADER = struct.Struct("<4sBB3IH3BIIB")
HEADER_SIZE = _HEADER.size


class FormatError(ValueError):
    """Malformed or inconsistent image/tensor data."""


@dataclass(frozen=True, eq=False)
class RgbImage:
    """Interleaved 8-bit RGB raster, row-major."""

    height: int
    width: int
    data: bytes

    def __post_init__(self):
        if self.height < 1 or self.width < 1:
            raise FormatError(f"image dims must be >= 1, got {self.height}x{self.width}")
        if len(self.data) != 3 * self.height * self.width:
            raise FormatError(
                f"expected {3 * self.height * self.width} bytes for "
                f"{self.height}x{self.width} RGB, got {len(self.data)}"
            )

    @classmethod
    def from_array(cls, arr) -> "RgbImage":
        arr = np.asarray(arr)
        if arr.ndim != 3 or arr.shape[2] != 3:
            raise FormatError(f"expected (H, W, 3) array, got shape {arr.shape}")
        if arr.dtype != np.uint8:
            raise FormatError(f"expected uint8 array, got {arr.dtype}")
        return cls(arr.shape[0], arr.shape[1], np.ascontiguousarray(arr).tobytes())

    def to_array(self) -> np.ndarray:
        return np.frombuffer(self.data, dtype=np.uint8).reshape(self.height, self.width, 3)

    def __eq__(self, other):
        if not isinstance(other, RgbImage):
            return NotImplemented
        return (self.height, self.width, self.data) == (other.height, other.width, other.data)


_PPM_TOKEN = re.compile(rb"(?:\s|#[^\n]*\n)*(\S+)")


def read_ppm(buf: bytes) -> RgbImage:
    """Parse a binary P6 stream with maxval 255."""
    buf = bytes(buf)
    if buf[:2] != b"P6":
        raise FormatError(f"unsupported PPM magic {buf[:2]!r}; only binary P6 is supported")
    pos = 2
    values = []
    for _ in range(3):
        m = _PPM_TOKEN.match(buf, pos)
        if m is None:
            raise FormatError("truncated PPM header")
        try:
            values.append(int(m.group(1)))
        except ValueError:
            raise FormatError(f"bad PPM header field {m.group(1)!r}") from None
        pos = m.end()
    width, height, maxval = values
    if maxval != 255:
        raise FormatError(f"only maxval 255 is supported, got {maxval}")
    if width < 1 or height < 1:
        raise FormatError(f"bad PPM dims {width}x{height}")
    # exactly one whitespace byte separates header from raster
    if pos >= len(buf) or buf[pos:pos + 1] not in (b" ", b"\t", b"\n", b"\r"):
        raise FormatError("missing whitespace after PPM header")
    pos += 1
    need = 3 * width * height
    payload = buf[pos:pos + need]
    if len(payload) < need:
        raise FormatError(f"truncated PPM payload: need {need} bytes, got {len(payload)}")
    return RgbImage(height, width, payload)


def write_ppm(img: RgbImage) -> bytes:
    return b"P6\n%d %d\n255\n" % (img.width, img.height) + img.data


def load_ppm(path) -> RgbImage:
    with open(path, "rb") as f:
        return read_ppm(f.read())


def save_ppm(img: RgbImage, path) -> None:
    atomic_write_bytes(path, write_ppm(img))


@dataclass(eq=False)
class TensorFile:
    """In-memory form of an ``FCRT`` file.

    ``data`` is a (d0, d1, d2) array of float32 or int16.  ``selection`` is
    (nY, nCb, nCr); all zeros means no selection metadata.
    """

    data: np.ndarray
    qf: int = 0
    selection: tuple = (0, 0, 0)
    height: int = 0
    width: int = 0
    ordering: int = ORDER_NONE
    version: int = field(default=VERSION)

    @property
    def dims(self):
        return tuple(self.data.shape)

    @property
    def dtype_code(self) -> int:
        if self.data.dtype == np.float32:
            return DTYPE_F32
        if self.data.dtype == np.int16:
            return DTYPE_I16
        raise FormatError(f"unsupported tensor dtype {self.data.dtype}; use float32 or int16")

    def validate(self) -> None:
        if self.data.ndim != 3:
            raise FormatError(f"tensor must be 3-D, got shape {self.data.shape}")
        if min(self.data.shape) < 1:
            raise FormatError(f"tensor dims must be positive, got {self.data.shape}")
        self.dtype_code
        if not 0 <= self.qf <= 100:
            raise FormatError(f"quality factor {self.qf} outside [0, 100]")
        if len(self.selection) != 3 or any(not 0 <= n <= 64 for n in self.selection):
            raise FormatError(f"bad selection counts {self.selection}")
        if any(self.selection) and sum(self.selection) != self.data.shape[2]:
            raise FormatError(
                f"selection {tuple(self.selection)} sums to {sum(self.selection)} "
                f"but tensor has {self.data.shape[2]} channels"
            )

    def __eq__(self, other):
        if not isinstance(other, TensorFile):
            return NotImplemented
        return (
            self.data.dtype == other.data.dtype
            and self.data.shape == other.data.shape
            and self.data.tobytes() == other.data.tobytes()
            and (self.qf, tuple(self.selection), self.height, self.width, self.ordering)
            == (other.qf, tuple(other.selection), other.height, other.width, other.ordering)
        )


def tensor_to_bytes(t: TensorFile) -> bytes:
    t.validate()
    code = t.dtype_code
    header = _HEADER.pack(
        MAGIC, VERSION, code, *t.data.shape,
        t.qf, *t.selection, t.height, t.width, t.ordering,
    )
    payload = np.ascontiguousarray(t.data, dtype=_DTYPES[code]).tobytes()
    return header + payload


def tensor_from_bytes(buf: bytes) -> TensorFile:
    if len(buf) < HEADER_SIZE:
        raise FormatError(f"tensor stream too short for header ({len(buf)} bytes)")
    (magic, version, code, d0, d1, d2, qf, ny, ncb, ncr,
     height, width, ordering) = _HEADER.unpack_from(buf)
    if magic != MAGIC:
        raise FormatError(f"bad magic {magic!r}")
    if version != VERSION:
        raise FormatError(f"unsupported tensor format version {version}")
    if code not in _DTYPES:
        raise FormatError(f"unknown dtype code {code}")
    dt = _DTYPES[code]
    count = d0 * d1 * d2
    if len(buf) - HEADER_SIZE != count * dt.itemsize:
        raise FormatError(
            f"payload is {len(buf) - HEADER_SIZE} bytes; dims {(d0, d1, d2)} "
            f"need {count * dt.itemsize}"
        )
    data = np.frombuffer(buf, dtype=dt, offset=HEADER_SIZE).reshape(d0, d1, d2)
    out = TensorFile(
        data=data.astype(dt.newbyteorder("="), copy=True),
        qf=qf, selection=(ny, ncb, ncr), height=height, width=width,
        ordering=ordering, version=version,
    )
    out.validate()
    return out


def atomic_write_bytes(path, payload: bytes) -> None:
    """Write via a temp file in the target directory, then rename over ``path``."""
    path = os.fspath(path)
    dirname = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=dirname, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "wb") as f:
            f.write(payload)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_tensor(t: TensorFile, path) -> None:
    atomic_write_bytes(path, tensor_to_bytes(t))


def read_tensor(path) -> TensorFile:
    with open(path, "rb") as f:
        return tensor_from_bytes(f.read())


def dtype_code(name: str) -> int:
    try:
        return _DTYPE_NAMES[name]
    except KeyError:
        raise ValueError(f"unknown dtype {name!r}; expected one of {sorted(_DTYPE_NAMES)}") from None
