"""Slab radiative transfer with discrete and random ordinates."""

import json as _json

from ._romslab import (
    Boundary,
    ConstantInflow,
    LinearInflow,
    Medium,
    Quadrature,
    RomslabError,
    RunConfig,
    SpatialGrid,
    TabulatedInflow,
    VelocityPartition,
    assemble_A,
    assemble_T,
    build_partition,
    cell_weights,
    dom_quadrature,
    reference_gauss,
    rom_sample,
    solve,
    sweep,
    trace_AstarA,
    weighted_l2_norm,
    weighted_norm,
)
from . import _romslab

__version__ = "0.1.0"


def parse_config(doc=None):
    """Merge a config mapping (or JSON text) over the defaults and validate it."""
    text = doc if isinstance(doc, str) else _json.dumps(doc or {})
    return _romslab._parse_config(text)


def config_hash(config):
    return _romslab._config_hash(config)


def run_study(config, kind, jobs=1):
    """Run a study; returns (summary dict, CSV text).

    kind is one of single-run, bias, dom, dom-gauss, delta-t, delta-b,
    regularization.
    """
    if not isinstance(config, RunConfig):
        config = parse_config(config)
    summary, csv = _romslab._run_study(config, kind, jobs)
    return _json.loads(summary), csv
