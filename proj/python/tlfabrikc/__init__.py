"""Python interface to the tlfabrikc continuum-arm solver."""

import csv
import io
import json

from ._core import (
    DEFAULT_CONNECTOR_LENGTH,
    SCHEMA_VERSION,
    ConfigError,
    InputError,
    cell_score,
    dispersion,
    forward_kinematics,
    round_trip,
    sample_workspace,
    virtual_link_length,
)
from . import _core


def _dump(obj):
    return "" if obj is None else json.dumps(obj)


def solve(target, robot=None, config=None, seed=0, ablation=None, dump_chain=False):
    """Solve one task. `target`, `robot` and `config` use the same JSON layout as the CLI files."""
    return json.loads(_core._solve(_dump(robot), json.dumps(target), _dump(config), seed, ablation or "", dump_chain))


def ftl(scene=None, robot=None, seed=0):
    """Follow-the-leader plan for a scene dict (the built-in arc scenario when omitted)."""
    return json.loads(_core._ftl(_dump(scene), _dump(robot), seed))


def bench(segments=(3,), tasks=1000, seed=0, jobs=1, methods=()):
    """Benchmark rows as dicts keyed by the CSV header."""
    text = _core._bench_csv(list(segments), tasks, seed, jobs, list(methods))
    lines = [line for line in text.splitlines() if not line.startswith("#")]
    rows = list(csv.DictReader(io.StringIO("\n".join(lines))))
    whole = {"segments", "tasks", "false_successes"}
    for row in rows:
        for key, value in row.items():
            if key != "method":
                row[key] = int(value) if key in whole else float(value)
    return rows


__all__ = [
    "DEFAULT_CONNECTOR_LENGTH",
    "SCHEMA_VERSION",
    "ConfigError",
    "InputError",
    "bench",
    "cell_score",
    "dispersion",
    "forward_kinematics",
    "ftl",
    "round_trip",
    "sample_workspace",
    "solve",
    "virtual_link_length",
]
