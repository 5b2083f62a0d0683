"""Smoke tests for the veerflow python module against the build tree."""

import json
import math
import sys

import veerflow

GOLDEN = (1 + 5**0.5) / 2
FIG8_STRETCH = (3 + 5**0.5) / 2


def main():
    fig8 = veerflow.figure_eight()
    report = json.loads(veerflow.validate(fig8))
    assert report["ok"] is True
    assert veerflow.infer_colors(fig8) == ["red", "blue"]

    fg = json.loads(veerflow.flow_graph(fig8))
    assert fg["vertices"] == 2 and len(fg["edges"]) == 6

    g = veerflow.growth_rate([(0, 0, 1), (0, 1, 1), (1, 0, 1)], mode="unit")
    assert abs(g["lambda"] - GOLDEN) < 1e-9

    counts = veerflow.cycle_counts([(0, 0, 1), (0, 1, 1), (1, 0, 1)], mode="unit", n_max=6)
    assert counts == [1, 3, 4, 7, 11, 18]  # Lucas numbers

    s = veerflow.stretch(fig8, [1, 1, 0, 0])
    assert abs(s["lambda"] - FIG8_STRETCH) < 1e-8

    e = veerflow.entropy(fig8, [2, 2, 0, 0])
    assert e["status"] == "interior-ok"
    assert abs(e["ent"] - math.log(FIG8_STRETCH) / 2) < 1e-8  # degree -1 homogeneity

    cone = json.loads(veerflow.carried_cone(fig8))
    assert cone["dim"] == 4 and len(cone["rays"]) == 2

    try:
        veerflow.stretch(fig8, [0, 0, 0, 0])
    except veerflow.DomainError as err:
        assert "weight-0" in str(err)
    else:
        raise AssertionError("zero class must report a weight-0 cycle")

    seg = veerflow.entropy_segment(fig8, [1, 1, 0, 0], [3, 3, 2, 2], k=5)
    assert seg["convex"] and len(seg["ents"]) == 5

    bundles = veerflow.layered_bundles("DD")
    assert len(bundles) >= 1

    print("python smoke passed")


if __name__ == "__main__":
    sys.exit(main())
