"""Liouvillian gaps of dissipative Floquet Clifford circuits with Haar-doped sites."""

import csv
import io

from ._core import (
    ConfigError,
    apply_channel,
    cycles,
    eigenmode_free,
    ensemble,
    fully_doped_formula,
    gap,
    haar_log_stats,
    max_eigenmode_free_cutoff,
    orbit,
    orbit_spectrum,
    pattern,
    run_cli,
    spectrum,
    staggered_formula,
    undoped_gap,
    weight_distribution,
)

__all__ = [
    "ConfigError",
    "apply_channel",
    "cycles",
    "eigenmode_free",
    "ensemble",
    "fully_doped_formula",
    "gap",
    "haar_log_stats",
    "max_eigenmode_free_cutoff",
    "orbit",
    "orbit_spectrum",
    "pattern",
    "records",
    "run_cli",
    "spectrum",
    "staggered_formula",
    "undoped_gap",
    "weight_distribution",
]


def records(*args):
    """Run a floqlab command and return its CSV rows as dicts.

    Raises RuntimeError on exit code 2; exit code 3 (partial failure) still
    returns rows, with the failing ones marked in their status column.
    """
    code, out, err = run_cli([str(a) for a in args])
    if code not in (0, 3):
        raise RuntimeError(err.strip() or f"floqlab exited with {code}")
    return list(csv.DictReader(io.StringIO(out)))
