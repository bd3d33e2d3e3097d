import json
from dataclasses import replace

import pytest
from hypothesis import given, strategies as st

from dctfcr.netshape import (
    LayerSpec,
    NetSpec,
    NetSpecError,
    compare,
    feature_shapes,
    layer_costs,
    load_netspec,
    multiply_adds,
    parse_netspec,
    shipped_netspec,
    with_input,
)


def conv(cin, cout, k=3, stride=1):
    return LayerSpec("conv", (k, k), cin, cout, stride)


def test_single_conv_cost():
    spec = NetSpec("one", (512, 1024, 3), (conv(3, 16),))
    assert multiply_adds(spec) == 9 * 3 * 16 * 512 * 1024 == 226_492_416


def test_stride_halves_with_ceiling():
    spec = NetSpec("s", (9, 15, 3), (conv(3, 8, stride=2), conv(8, 8, stride=2)))
    assert feature_shapes(spec) == [(5, 8, 8), (3, 4, 8)]


def test_channel_chain_validated():
    with pytest.raises(NetSpecError, match="expects 4"):
        NetSpec("bad", (8, 8, 3), (conv(3, 8), conv(4, 8))).validate()
    with pytest.raises(NetSpecError):
        multiply_adds(NetSpec("bad", (8, 8, 3), (conv(5, 8),)))


@pytest.mark.parametrize("kwargs", [
    dict(kind="pool", kernel=(2, 2), in_channels=3, out_channels=3),
    dict(kind="conv", kernel=(0, 3), in_channels=3, out_channels=3),
    dict(kind="conv", kernel=(3, 3), in_channels=0, out_channels=3),
    dict(kind="conv", kernel=(3, 3), in_channels=3, out_channels=3, stride=3),
    dict(kind="downsample", kernel=(3, 3), in_channels=3, out_channels=15, stride=1),
    dict(kind="block-group", kernel=(3, 3), in_channels=60, out_channels=261, repeat=5),
    dict(kind="block-group", kernel=(3, 3), in_channels=60, out_channels=260, repeat=5, stride=2),
])
def test_layer_validation(kwargs):
    with pytest.raises(NetSpecError):
        LayerSpec(**kwargs)


def test_downsample_block_costs():
    # in < out: conv makes out - in maps, the pooled input fills the rest
    grow = LayerSpec("downsample", (3, 3), 3, 15, 2)
    shrink = LayerSpec("downsample", (3, 3), 260, 130, 2)
    (_, shape, cost), = layer_costs(NetSpec("g", (512, 1024, 3), (grow,)))
    assert shape == (256, 512, 15) and cost == 9 * 3 * 12 * 256 * 512
    (_, shape, cost), = layer_costs(NetSpec("s", (128, 256, 260), (shrink,)))
    assert shape == (64, 128, 130) and cost == 9 * 260 * 130 * 64 * 128


def test_block_group_cost_by_hand():
    g = LayerSpec("block-group", (3, 3), 60, 140, repeat=2)
    hw = 10 * 20
    # module 1: 1x1 60->40, four 3-tap convs 40->40; module 2 starts at 100 maps
    expected = (60 * 40 + 12 * 40 * 40) * hw + (100 * 40 + 12 * 40 * 40) * hw
    assert multiply_adds(NetSpec("b", (10, 20, 60), (g,))) == expected
    assert g.growth == 40


def test_compare_self_and_doubled():
    base = NetSpec("base", (32, 48, 4), (conv(4, 8), conv(8, 16, stride=2), conv(16, 5, k=1)))
    assert compare(base, base)["ratio"] == 1.0
    doubled = NetSpec("x2", (32, 48, 8), tuple(l.scaled(2) for l in base.layers))
    assert compare(doubled, base)["ratio"] == 4.0
    rep = compare(base, base)["report"]
    assert "ratio base / base = 1.0000" in rep


@given(st.integers(1, 64), st.integers(1, 64))
def test_cost_linear_in_area(h, w):
    layers = (conv(3, 8), conv(8, 8, k=1), LayerSpec("block-group", (3, 3), 8, 24, repeat=2))
    a = multiply_adds(NetSpec("a", (h, w, 3), layers))
    b = multiply_adds(NetSpec("b", (2 * h, w, 3), layers))
    assert b == 2 * a


def test_removing_stride_two_quadruples_downstream():
    tail = (conv(8, 16), conv(16, 16, k=1))
    with_ds = NetSpec("d", (64, 64, 3), (conv(3, 8, stride=2),) + tail)
    without = NetSpec("n", (64, 64, 3), (conv(3, 8, stride=1),) + tail)
    c1 = [c for *_, c in layer_costs(with_ds)]
    c2 = [c for *_, c in layer_costs(without)]
    assert c2[1:] == [4 * c for c in c1[1:]]


def test_json_round_trip(tmp_path):
    doc = {"name": "tiny", "input": [16, 16, 3],
           "layers": [{"kind": "conv", "kernel": [3, 3], "in": 3, "out": 4, "stride": 2}]}
    p = tmp_path / "tiny.json"
    p.write_text(json.dumps(doc))
    spec = load_netspec(p)
    assert feature_shapes(spec) == [(8, 8, 4)]
    with pytest.raises(NetSpecError):
        parse_netspec({"name": "x", "input": [1, 1, 1], "layers": [{"kind": "conv"}]})


def test_shipped_edanet_shapes():
    e = shipped_netspec("edanet")
    assert e.input == (512, 1024, 3)
    assert feature_shapes(e)[-1][:2] == (64, 128)
    on_fcr = with_input(e, (64, 128, 192))
    assert feature_shapes(on_fcr)[-1][:2] == (8, 16)


def test_shipped_dct_edanet_keeps_resolution():
    d = shipped_netspec("dct_edanet")
    assert d.input == (64, 128, 192)
    assert all(s[:2] == (64, 128) for s in feature_shapes(d))
    assert all(l.stride == 1 for l in d.layers)
    assert d.block_repeats == 22


def test_with_input_rewrites_first_layer():
    e = shipped_netspec("edanet")
    moved = with_input(e, (64, 128, 192))
    assert moved.layers[0].in_channels == 192
    assert moved.layers[1:] == e.layers[1:]
    assert replace(moved.layers[0], in_channels=3) == e.layers[0]
