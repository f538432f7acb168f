""" Experiment configuration for the command line: parameter validation, string sources and the config hash. """

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

from .exceptions import ConfigError, ZetaLabError
from .fractal_strings import (
    FractalString,
    cantor_string,
    lapidus_maier_string,
    lattice_string,
    power_law_string,
    single_interval,
)
from .zeros import MAX_ORDINATE

FORMATS = ("csv", "json")

# Options shared by every sub-command; they never enter the config hash.
COMMON_OPTIONS = ("command", "out", "format", "plot", "verbose", "poolsize")


@dataclass(frozen=True)
class ExperimentConfig:
    """One command-line experiment: the sub-command, its numeric parameters and the output options."""

    command: str
    params: dict = field(default_factory=dict)
    out: str = "."
    format: str = "csv"
    plot: bool = False
    verbose: bool = False
    poolsize: int = 1

    @classmethod
    def from_namespace(cls, namespace):
        values = vars(namespace)
        params = {k: _canonical(v) for k, v in values.items() if k not in COMMON_OPTIONS and k != "handler"}
        return cls(values["command"], params, values["out"], values["format"], values["plot"], values["verbose"],
                   values["poolsize"])

    def canonical_json(self):
        return json.dumps({"command": self.command, "params": self.params}, sort_keys=True, separators=(",", ":"),
                          default=str)

    @property
    def config_hash(self):
        """SHA-256 of the canonical JSON of command and parameters."""
        return hashlib.sha256(self.canonical_json().encode()).hexdigest()

    def __getitem__(self, key):
        return self.params[key]

    def validate(self):
        """Check every parameter against the preconditions of its command.

        :raises ConfigError: on the first violated precondition.
        """
        p = self.params
        if self.format not in FORMATS:
            raise ConfigError(f"--format must be one of {FORMATS}, got {self.format!r}.")
        if self.poolsize < 1:
            raise ConfigError(f"--poolsize must be at least 1, got {self.poolsize}.")
        _positive(p, "tmax", "T", "resolution", "tol", "x_fit", "samples", "eps_decades", "x_min", "x_max", "P")
        _non_negative(p, "c", "T0", "zeros")
        if "tmax" in p and p["tmax"] > MAX_ORDINATE and self.command in ("zeros", "rh-scan", "invertibility"):
            raise ConfigError(f"--tmax must be at most {MAX_ORDINATE:g} for {self.command}, got {p['tmax']}.")
        if "T0" in p and "T" in p and p["T0"] > p["T"]:
            raise ConfigError(f"--T0 must not exceed --T, got T0={p['T0']}, T={p['T']}.")
        if "offset" in p and not 0 <= p["offset"] < 1:
            raise ConfigError(f"--offset must lie in [0, 1), got {p['offset']}.")
        if "D" in p and not 0 < p["D"] < 1:
            raise ConfigError(f"--D must lie in (0, 1), got {p['D']}.")
        if "x_min" in p and "x_max" in p and not p["x_min"] < p["x_max"]:
            raise ConfigError(f"--x-min must be below --x-max, got {p['x_min']} and {p['x_max']}.")
        if self.command == "rh-scan":
            for c in p["c"]:
                if not 0 < c < 1:
                    raise ConfigError(f"rh-scan abscissas must lie in (0, 1), got {c}.")
        if self.command == "operator-check" and not p["c"] > 1:
            raise ConfigError(f"operator-check needs c > 1, got {p['c']}.")
        if self.command == "explicit":
            for x in p["x"]:
                if not 2 < x <= 1e7:
                    raise ConfigError(f"explicit needs 2 < x <= 1e7, got {x}.")
        if self.command == "momentum-witness" and list(p["widths"]) != sorted(p["widths"]):
            raise ConfigError("--widths must be ascending.")
        if "string" in p:
            load_string(p["string"])
        return self


def _canonical(value):
    if isinstance(value, list):
        return tuple(value)
    return value


def _positive(params, *names):
    for name in names:
        if name in params and params[name] is not None and not params[name] > 0:
            raise ConfigError(f"--{name.replace('_', '-')} must be positive, got {params[name]}.")


def _non_negative(params, *names):
    for name in names:
        if name in params and params[name] is not None and isinstance(params[name], (int, float)) \
                and not params[name] >= 0:
            raise ConfigError(f"--{name.replace('_', '-')} must be non-negative, got {params[name]}.")


def float_list(text):
    """Parse ``"0.3,0.4,0.6"`` into a list of floats (argparse type)."""
    try:
        return [float(item) for item in str(text).split(",") if item.strip()]
    except ValueError as err:
        raise ConfigError(f"Expected a comma-separated list of numbers, got {text!r}.") from err


def complex_list(text):
    """Parse ``"2,0.5+14.1347j"`` into a list of complex numbers (argparse type)."""
    try:
        return [complex(item.replace(" ", "")) for item in str(text).split(",") if item.strip()]
    except ValueError as err:
        raise ConfigError(f"Expected a comma-separated list of complex numbers, got {text!r}.") from err


def load_string(source: str) -> FractalString:
    """Fractal string from a command-line source.

    Accepted forms: ``cantor``, ``unit``, ``power:D[:J]``, ``lattice:b:m[:depth]``,
    ``lapidus-maier:D:tau:beta[:J]``, an inline JSON record or the path of a JSON file.

    :raises ConfigError: if the source cannot be parsed or violates a string precondition.
    """
    name, *args = str(source).split(":")
    try:
        if source == "cantor":
            return cantor_string()
        if source == "unit":
            return single_interval()
        if name == "power" and len(args) in (1, 2):
            return power_law_string(float(args[0]), 1.0, int(args[1]) if len(args) == 2 else 1000)
        if name == "lattice" and len(args) in (2, 3):
            depth = int(args[2]) if len(args) == 3 else None
            return lattice_string(float(args[0]), float(args[1]), depth)
        if name == "lapidus-maier" and len(args) in (3, 4):
            count = int(args[3]) if len(args) == 4 else 1000
            return lapidus_maier_string(float(args[0]), float(args[1]), float(args[2]), count)
        if source.lstrip().startswith("{"):
            return FractalString.from_json(source)
        path = Path(source)
        if path.is_file():
            return FractalString.from_json(path.read_text())
    except (ValueError, KeyError, TypeError, ZetaLabError) as err:
        raise ConfigError(f"Invalid string source {source!r}: {err}") from err
    raise ConfigError(f"Unknown string source {source!r}.")
