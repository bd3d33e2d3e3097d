"""Feature-map shape propagation and multiply-add counting for conv nets.

Networks are described declaratively (see ``netspecs/*.json``); nothing is
executed.  Three layer kinds are understood:

``conv``
    kh x kw convolution, ``in -> out`` channels, stride 1 or 2.
``downsample``
    EDANet-style downsampling block.  When ``in < out`` a stride-2 conv
    produces ``out - in`` maps that are concatenated with a 2x2 max-pool of
    the input; otherwise it is a plain stride-2 conv to ``out`` maps.
``block-group``
    ``repeat`` densely connected EDA modules.  Each module adds
    ``growth = (out - in) / repeat`` maps: a 1x1 conv to ``growth`` maps
    followed by two asymmetric pairs (kh x 1 then 1 x kw), concatenated with
    its input.

Costs count one multiply-add per kernel element per output element; bias,
normalization, pooling and activations are free.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from importlib import resources

__all__ = [
    "LayerSpec",
    "NetSpec",
    "NetSpecError",
    "feature_shapes",
    "multiply_adds",
    "layer_costs",
    "compare",
    "describe",
    "load_netspec",
    "parse_netspec",
    "shipped_netspec",
    "with_input",
]

KINDS = ("conv", "downsample", "block-group")


class NetSpecError(ValueError):
    pass


@dataclass(frozen=True)
class LayerSpec:
    kind: str
    kernel: tuple
    in_channels: int
    out_channels: int
    stride: int = 1
    repeat: int = 1
    name: str = ""

    def __post_init__(self):
        if self.kind not in KINDS:
            raise NetSpecError(f"unknown layer kind {self.kind!r}")
        if len(self.kernel) != 2 or min(self.kernel) < 1:
            raise NetSpecError(f"bad kernel {self.kernel}")
        if self.in_channels < 1 or self.out_channels < 1:
            raise NetSpecError(f"channels must be >= 1 ({self.in_channels} -> {self.out_channels})")
        if self.stride not in (1, 2):
            raise NetSpecError(f"stride must be 1 or 2, got {self.stride}")
        if self.repeat < 1:
            raise NetSpecError(f"repeat must be >= 1, got {self.repeat}")
        if self.kind == "downsample" and self.stride != 2:
            raise NetSpecError("downsample layers have stride 2")
        if self.kind == "block-group":
            if self.stride != 1:
                raise NetSpecError("block groups keep resolution (stride 1)")
            grow = self.out_channels - self.in_channels
            if grow <= 0 or grow % self.repeat:
                raise NetSpecError(
                    f"block group {self.in_channels}->{self.out_channels} is not "
                    f"{self.repeat} equal growth steps"
                )

    @property
    def growth(self) -> int:
        return (self.out_channels - self.in_channels) // self.repeat

    def scaled(self, factor: int) -> "LayerSpec":
        return replace(self, in_channels=self.in_channels * factor,
                       out_channels=self.out_channels * factor)


@dataclass(frozen=True)
class NetSpec:
    name: str
    input: tuple
    layers: tuple = field(default_factory=tuple)

    def validate(self) -> None:
        if len(self.input) != 3 or min(self.input) < 1:
            raise NetSpecError(f"input must be three positive ints (H, W, C), got {self.input}")
        c = self.input[2]
        for i, layer in enumerate(self.layers):
            if layer.in_channels != c:
                raise NetSpecError(
                    f"layer {i} ({layer.name or layer.kind}) expects {layer.in_channels} "
                    f"channels but receives {c}"
                )
            c = layer.out_channels

    @property
    def block_repeats(self) -> int:
        return sum(l.repeat for l in self.layers if l.kind == "block-group")


def _out_hw(h, w, stride):
    return -(-h // stride), -(-w // stride)


def _layer_cost(layer: LayerSpec, h: int, w: int) -> int:
    kh, kw = layer.kernel
    if layer.kind == "conv":
        return kh * kw * layer.in_channels * layer.out_channels * h * w
    if layer.kind == "downsample":
        produced = layer.out_channels - layer.in_channels
        if produced <= 0:
            produced = layer.out_channels
        return kh * kw * layer.in_channels * produced * h * w
    g = layer.growth
    total = 0
    c = layer.in_channels
    for _ in range(layer.repeat):
        total += c * g * h * w                    # 1x1 bottleneck
        total += 2 * (kh + kw) * g * g * h * w    # two asymmetric pairs
        c += g
    return total


def layer_costs(spec: NetSpec) -> list:
    """Per-layer ``(layer, (H, W, C) out, multiply-adds)``."""
    spec.validate()
    h, w, _ = spec.input
    rows = []
    for layer in spec.layers:
        h, w = _out_hw(h, w, layer.stride)
        rows.append((layer, (h, w, layer.out_channels), _layer_cost(layer, h, w)))
    return rows


def feature_shapes(spec: NetSpec) -> list:
    return [shape for _, shape, _ in layer_costs(spec)]


def multiply_adds(spec: NetSpec) -> int:
    return sum(cost for _, _, cost in layer_costs(spec))


def with_input(spec: NetSpec, input_dims) -> NetSpec:
    """Feed ``spec`` a different input; the first layer adopts its channel count."""
    h, w, c = (int(x) for x in input_dims)
    layers = list(spec.layers)
    if layers:
        layers[0] = replace(layers[0], in_channels=c)
    out = NetSpec(spec.name, (h, w, c), tuple(layers))
    out.validate()
    return out


def _fmt_count(n: int) -> str:
    return f"{n / 1e9:.2f}B" if n >= 1e8 else f"{n / 1e6:.2f}M"


def describe(spec: NetSpec) -> str:
    """Human-readable per-layer table with the total."""
    lines = [f"{spec.name}  input {spec.input[0]}x{spec.input[1]}x{spec.input[2]}"]
    for layer, (h, w, c), cost in layer_costs(spec):
        label = layer.name or layer.kind
        rep = f" x{layer.repeat}" if layer.kind == "block-group" else ""
        lines.append(f"  {label:<24}{rep:<5} -> {h}x{w}x{c:<6} {cost:>16,d}")
    total = multiply_adds(spec)
    lines.append(f"  total multiply-adds {total:,d} ({_fmt_count(total)})")
    return "\n".join(lines)


def compare(a: NetSpec, b: NetSpec) -> dict:
    """Shapes and totals of two specs plus ``ratio = total(a) / total(b)``."""
    ta, tb = multiply_adds(a), multiply_adds(b)
    ratio = ta / tb
    lines = [describe(a), describe(b), f"ratio {a.name} / {b.name} = {ratio:.4f}"]
    return {
        "shapes": (feature_shapes(a), feature_shapes(b)),
        "totals": (ta, tb),
        "ratio": ratio,
        "report": "\n".join(lines),
    }


def parse_netspec(doc: dict) -> NetSpec:
    try:
        layers = tuple(
            LayerSpec(
                kind=l["kind"],
                kernel=tuple(l.get("kernel", (1, 1))),
                in_channels=int(l["in"]),
                out_channels=int(l["out"]),
                stride=int(l.get("stride", 1)),
                repeat=int(l.get("repeat", 1)),
                name=l.get("name", ""),
            )
            for l in doc["layers"]
        )
        spec = NetSpec(doc["name"], tuple(int(x) for x in doc["input"]), layers)
    except (KeyError, TypeError) as e:
        raise NetSpecError(f"malformed network description: {e!r}") from None
    spec.validate()
    return spec


def load_netspec(path) -> NetSpec:
    with open(path) as f:
        return parse_netspec(json.load(f))


def shipped_netspec(name: str) -> NetSpec:
    """Load one of the bundled descriptions: ``edanet`` or ``dct_edanet``."""
    text = resources.files("dctfcr").joinpath("netspecs").joinpath(f"{name}.json").read_text()
    return parse_netspec(json.loads(text))
