""" Result files: CSV tables with ``#`` header lines, JSON documents with a ``meta`` object, and PDF plots. """

import json
import math
from pathlib import Path

import matplotlib.pyplot as plt
import numpy as np
import pandas as pd

from ._version import __version__


def metadata(config, disclosures=None):
    """Header fields shared by every output file: tool version, config hash and disclosures."""
    return {
        "tool": "zetalab",
        "version": __version__,
        "command": config.command,
        "config_hash": config.config_hash,
        "disclosures": dict(disclosures or {}),
    }


def jsonable(value):
    """Convert numpy scalars and arrays, complex numbers, frames and non-finite floats into JSON values."""
    if isinstance(value, pd.DataFrame):
        return [jsonable(row) for row in value.to_dict(orient="records")]
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [jsonable(v) for v in value]
    if isinstance(value, (complex, np.complexfloating)):
        return [jsonable(value.real), jsonable(value.imag)]
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return float(value) if math.isfinite(value) else None
    return value


def write_result(result, config, disclosures=None):
    """Write ``result`` to ``<out>/<command>.<format>``.

    A DataFrame becomes a CSV table; a dict is written as a one-row CSV. JSON output always has the form
    ``{"meta": ..., "result": ...}``.

    :return: Path of the written file.
    :rtype: pathlib.Path
    """
    out_dir = Path(config.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / f"{config.command}.{config.format}"
    meta = metadata(config, disclosures)
    if config.format == "json":
        with open(path, "w") as handle:
            json.dump({"meta": jsonable(meta), "result": jsonable(result)}, handle, indent=2, sort_keys=True)
            handle.write("\n")
        return path

    frame = result if isinstance(result, pd.DataFrame) else pd.DataFrame([jsonable(result)])
    with open(path, "w") as handle:
        handle.write(f"# {meta['tool']} {meta['version']}\n")
        handle.write(f"# command: {meta['command']}\n")
        handle.write(f"# config_hash: {meta['config_hash']}\n")
        for key, value in sorted(meta["disclosures"].items()):
            handle.write(f"# {key}: {value}\n")
        frame.to_csv(handle, index=False, float_format="%.15g")
    return path


def read_table(path):
    """Read a CSV result table, skipping the ``#`` header."""
    return pd.read_csv(path, comment="#")


def plot_columns(frame, x, ys, path, xlabel=None, ylabel=None, logx=False, logy=False):
    """Line plot of the columns ``ys`` against ``x`` into a PDF file."""
    fig, ax = plt.subplots(figsize=(6, 4))
    for y in ys:
        ax.plot(frame[x], frame[y], label=y, lw=1)
    if logx:
        ax.set_xscale("log")
    if logy:
        ax.set_yscale("log")
    ax.set_xlabel(xlabel or x)
    ax.set_ylabel(ylabel or ", ".join(ys))
    ax.legend()
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return Path(path)
