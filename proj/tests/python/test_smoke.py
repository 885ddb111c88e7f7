import math
import os

import numpy as np
import pytest

import romslab


def test_pure_absorber_pair():
    medium = romslab.Medium.uniform(0.0, 1.0, 1, 1.0, 0.0, 1.0)
    part = romslab.build_partition(2, 0.5)
    quad = romslab.dom_quadrature(part, "midpoint")
    phi, report = romslab.solve(medium, romslab.Boundary(), quad)
    mu = 0.75
    assert report["converged"]
    assert phi[0] == pytest.approx(1.0 - mu * (1.0 - math.exp(-1.0 / mu)), abs=1e-14)


def test_sweep_matches_closed_form():
    medium = romslab.Medium.uniform(0.0, 1.0, 10, 1.0, 0.0, 0.0)
    avg, edges = romslab.sweep(medium, 0.5, [0.0] * 10, 1.0)
    assert edges[5] == pytest.approx(math.exp(-1.0), rel=1e-14)
    assert len(avg) == 10


def test_rom_samples_are_reproducible_and_mirrored():
    part = romslab.build_partition(8, 0.05)
    a = romslab.rom_sample(part, 7, 3)
    b = romslab.rom_sample(part, 7, 3)
    c = romslab.rom_sample(part, 7, 4)
    assert a.ordinates == b.ordinates
    assert a.ordinates != c.ordinates
    assert np.allclose(np.array(a.ordinates), -np.array(a.ordinates[::-1]))
    assert sum(a.weights) == pytest.approx(1.0)
    for (lo, hi), mu in zip(part.cells, a.ordinates):
        assert lo < mu < hi


def test_operator_norms_are_contractive():
    grid = romslab.SpatialGrid([0.0, 0.3, 1.0, 1.4])
    medium = romslab.Medium(grid, [1.0, 3.0, 0.5], [0.5, 2.0, 0.1], [0.0, 0.0, 0.0])
    w = np.array(romslab.cell_weights(medium))
    a = romslab.assemble_A(medium, -0.4)
    norm = romslab.weighted_norm(a, w)
    s = np.sqrt(w)
    assert norm == pytest.approx(np.linalg.norm(s[:, None] * a / s[None, :], 2), rel=1e-9)
    assert norm <= 1.0 + 1e-10
    t = romslab.assemble_T(medium, romslab.rom_sample(romslab.build_partition(6, 0.1), 1, 0))
    assert romslab.weighted_norm(t, w) <= 1.0 + 1e-10


def test_errors_carry_codes():
    with pytest.raises(romslab.RomslabError) as info:
        romslab.build_partition(7, 0.1)
    assert info.value.code == "OddN"
    with pytest.raises(romslab.RomslabError) as info:
        romslab.parse_config({"medium": {"sigma_s": 1.0}})
    assert "/medium/sigma_s" in str(info.value)


def test_config_and_study_round_trip():
    doc = {
        "medium": {"cells": 20},
        "study": {"n_list": [4, 8, 16], "samples": 16},
        "operator": {"cells": 10, "n_list": [4, 8, 16], "samples": 40},
    }
    config = romslab.parse_config(doc)
    assert config.n_list == [4, 8, 16]
    assert romslab.config_hash(config) == romslab.config_hash(romslab.parse_config(doc))
    summary, csv = romslab.run_study(config, "dom")
    assert summary["fit"]["slope"] < -1.0
    assert csv.splitlines()[0] == "n,estimate,se,samples,flagged,wall_time_s"
    again = romslab.run_study(config, "single-run", jobs=3)[1]
    assert again == romslab.run_study(config, "single-run", jobs=1)[1]


def test_checked_in_configs_parse():
    config_dir = os.environ.get("ROMSLAB_CONFIG_DIR")
    if not config_dir:
        pytest.skip("config directory not provided")
    for name in ("defaults.json", "benchmark.json", "operator.json"):
        with open(os.path.join(config_dir, name)) as f:
            romslab.parse_config(f.read())
