import io
import json

import pytest

from plantedclique import io as gio
from plantedclique.generate import GenParams, generate_instance


def roundtrip(inst):
    buf = io.StringIO()
    gio.write_bundle(inst, buf)
    buf.seek(0)
    return gio.read_bundle(buf)


def test_bundle_round_trip_rebuilds_base():
    inst = generate_instance(GenParams(60, 0.5, 20, seed=21), "random")
    back = roundtrip(inst)
    assert back.planted_graph == inst.planted_graph
    assert back.base == inst.base
    assert back.planted == inst.planted
    assert back.params == inst.params
    assert back.adversary.strategy == "random"


def test_bundle_keeps_strategy_params():
    inst = generate_instance(
        GenParams(80, 0.5, 30, seed=22), "common_neighborhood", t_size=1
    )
    back = roundtrip(inst)
    assert back.adversary.params["anchors"] == inst.adversary.params["anchors"]
    assert back.adversary.params["t_size"] == 1


def test_bundle_bytes_deterministic():
    def render():
        inst = generate_instance(GenParams(40, 0.5, 10, seed=23), "low_degree")
        buf = io.StringIO()
        gio.write_bundle(inst, buf)
        return buf.getvalue()

    assert render() == render()


def test_bundle_schema_pinned():
    inst = generate_instance(GenParams(10, 0.5, 3, seed=24), "random")
    buf = io.StringIO()
    gio.write_bundle(inst, buf)
    header = json.loads(buf.getvalue().splitlines()[0])
    assert header["schema"] == gio.BUNDLE_SCHEMA
    assert sorted(header) == [
        "k", "kind", "n", "p", "planted", "schema", "seed",
        "strategy", "strategy_params",
    ]


def test_bundle_rejects_unknown_schema():
    with pytest.raises(gio.FormatError):
        gio.read_bundle(io.StringIO('{"schema": "other/9"}\n0 0\n'))


def test_load_graph_dispatch(tmp_path):
    inst = generate_instance(GenParams(12, 0.5, 4, seed=25), "random")
    bundle = tmp_path / "inst.bundle"
    gio.save_bundle(inst, bundle)
    assert gio.load_graph(bundle) == inst.planted_graph

    edge = tmp_path / "g.edges"
    with edge.open("w") as fh:
        gio.write_edge_list(inst.planted_graph, fh)
    assert gio.load_graph(edge) == inst.planted_graph

    dim = tmp_path / "g.dimacs"
    with dim.open("w") as fh:
        gio.write_dimacs(inst.planted_graph, fh)
    assert gio.load_graph(dim) == inst.planted_graph


def test_independent_set_bundle_round_trip():
    inst = generate_instance(GenParams(40, 0.4, 12, seed=26), "is_random")
    back = roundtrip(inst)
    assert back.adversary.kind == "independent_set"
    assert back.planted_graph == inst.planted_graph
