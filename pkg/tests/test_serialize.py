from __future__ import annotations

import pytest

from npsupport.generators import gen_clique_intersection_system
from npsupport.model import Provenance, Support
from npsupport.serialize import (
    Instance,
    InstanceFormatError,
    instance_from_json,
    instance_to_json,
    support_from_json,
    support_to_json,
    to_dot,
)


def test_instance_round_trip():
    gen = gen_clique_intersection_system(2, 12, 6, 6, seed=1)
    inst = Instance(gen.family_h, gen.family_k, gen.graph, gen.coloring)
    back = instance_from_json(instance_to_json(inst))
    assert back == inst


def test_cycle_instance_round_trip():
    data = {"cycle": 5, "H": [[0, 1], [3]], "K": [[1, 2]]}
    inst = instance_from_json(data)
    assert inst.is_cycle and inst.cycle_system().n == 5
    assert instance_to_json(inst) == data


@pytest.mark.parametrize("data", [
    {},
    {"H": "x"},
    {"cycle": 0, "H": [[0]]},
    {"cycle": 3, "H": [[4]]},
    {"graph": {"n": 2}, "H": [[0]], "coloring": ["r"]},
    {"graph": {"n": 2}, "H": [[]]},
])
def test_bad_instances(data):
    with pytest.raises(InstanceFormatError):
        instance_from_json(data)


def test_support_round_trip():
    sup = Support.from_label_edges([0, 2, 5], [(0, 5), (2, 5)], Provenance("dual", 1, 4, None, {"pushed": True}))
    back = support_from_json(support_to_json(sup))
    assert back.label_edges() == sup.label_edges()
    assert back.provenance == sup.provenance


def test_dot_output():
    text = to_dot([(0, 1)], [0, 1, 2])
    assert '"2";' in text and '"0" -- "1";' in text
