""" Command-line front end: ``zetalab <command> [options]``.

Every command validates its parameters, runs one experiment and writes ``<out>/<command>.csv`` (or ``.json``)
with a header holding the tool version, the config hash and the truncation disclosures. Exit codes: 0 on
success, 2 on invalid parameters, 3 when the computation fails; errors are reported as JSON on stderr.
"""

import argparse
import json
import sys
from dataclasses import asdict
from pathlib import Path

import numpy as np
import pandas as pd

from ._version import __version__
from .complex_dimensions import (
    Window,
    abscissa_of_convergence,
    complex_dimensions_in,
    dimension_table,
    staircase_table,
    tube_formula_via_dimensions,
)
from .config import ExperimentConfig, complex_list, float_list, load_string
from .exceptions import ConfigError, ZetaLabError
from .fractal_strings import LatticeRule, direct_tube_volume
from .output import plot_columns, write_result
from .riemann_explicit import duality_report
from .spectral_operator import operator_consistency_report
from .spectral_side import (
    inverse_problem_experiment,
    lapo_coefficient_check,
    spectral_counting,
    weyl_remainder_profile,
)
from .truncation import (
    TruncationSpec,
    approximate_point_spectrum_witness,
    global_operator_curve,
    quasi_invertibility_scan,
    report_frame,
    rh_diagnostic,
    truncated_invertibility,
    truncated_spectrum_curve,
)
from .zeros import SCAN_STEP, find_critical_zeros
from .zeta_engine import EvalAccuracy, xi, zeta, zeta_derivative

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_FAILED = 3


class _Parser(argparse.ArgumentParser):
    """Argument parser that reports usage errors as :class:`ConfigError`."""

    def error(self, message):
        raise ConfigError(message)


def _window(config):
    return Window(config["sigma_min"], config["window_tmax"])


def _plot(config, frame, x, ys, **kwargs):
    if config.plot:
        path = Path(config.out) / f"{config.command}.pdf"
        plot_columns(frame, x, ys, path, **kwargs)
        print(f"Wrote {path}")


def run_zeros(config):
    acc = EvalAccuracy(abs_tol=config["tol"])
    zeros = find_critical_zeros(config["tmax"], acc, use_cache=not config["no_cache"], verbose=config.verbose)
    frame = pd.DataFrame({"t": [z.t for z in zeros], "half_width": [z.half_width for z in zeros]})
    return frame, {"scan_step": SCAN_STEP, "abs_tol": config["tol"], "t_max": config["tmax"]}


def run_zeta_eval(config):
    func = {"zeta": zeta, "derivative": zeta_derivative, "xi": xi}[config["function"]]
    s = np.array(config["s"], dtype=complex)
    values = np.asarray(func(s), dtype=complex)
    frame = pd.DataFrame({"s_re": s.real, "s_im": s.imag, "re": values.real, "im": values.imag})
    return frame, {"function": config["function"], "abs_tol": EvalAccuracy().abs_tol}


def run_string_info(config):
    string = load_string(config["string"])
    info = {
        "name": string.name,
        "distinct_lengths": string.count,
        "is_finite": string.is_finite,
        "total_length": string.total_length,
        "abscissa": abscissa_of_convergence(string),
        "next_length": string.next_length,
        "tail_length": string.tail_length,
    }
    return info, {"truncation_bound": string.truncation_bound}


def run_tube(config):
    string = load_string(config["string"])
    decades = config["eps_decades"]
    eps = np.logspace(-decades, -1, 10 * decades + 1)
    direct = direct_tube_volume(string, eps)
    formula = tube_formula_via_dimensions(string, eps, _window(config))
    frame = pd.DataFrame({"epsilon": eps, "direct": direct, "formula": formula, "abs_error": np.abs(direct - formula)})
    _plot(config, frame, "epsilon", ["direct", "formula"], logx=True, logy=True)
    return frame, {"truncation_bound": string.truncation_bound, "window": asdict(_window(config))}


def run_dims(config):
    string = load_string(config["string"])
    frame = dimension_table(complex_dimensions_in(string, _window(config)))
    disclosures = {"window": asdict(_window(config))}
    if isinstance(string.rule, LatticeRule):
        disclosures["residue_convention"] = "1/(m log b) for every pole"
        disclosures["residue_note"] = (
            "residues use 1/(m log b), i.e. 1/(2 log 3) for the Cantor string; the figure 1/log 3 often quoted for"
            " the Cantor string omits the factor 1/m and differs from the computed value by a factor 2"
        )
    return frame, disclosures


def run_counting(config):
    xs = np.asarray(config["x"], dtype=float)
    string = load_string(config["string"]).covering(xs.max())
    return staircase_table(string, xs, _window(config)), {"window": asdict(_window(config))}


def run_spectral_count(config):
    xs = np.asarray(config["x"], dtype=float)
    string = load_string(config["string"]).covering(xs.max())
    rows = []
    for x in xs:
        direct, convolution = spectral_counting(string, x)
        rows.append({"x": x, "direct": direct.count, "convolution": convolution.count})
    return pd.DataFrame(rows), {"truncation_bound": string.truncation_bound}


def run_weyl(config):
    string = load_string(config["string"]).covering(config["x_max"])
    xs = np.logspace(np.log10(config["x_min"]), np.log10(config["x_max"]), config["samples"])
    frame = weyl_remainder_profile(string, xs)
    _plot(config, frame, "x", ["remainder"], logx=True)
    return frame, {"weyl_term": "total_length * x", "truncation_bound": string.truncation_bound}


def run_lapo(config):
    report = lapo_coefficient_check(config["D"], config["x_fit"], config["samples"])
    return asdict(report), {"fit_range": f"[{config['x_fit'] / 100:g}, {config['x_fit']:g}]"}


def run_inverse_problem(config):
    report = inverse_problem_experiment(config["D"], config["tau"], config["beta"], config["x_min"], config["x_max"],
                                        config["samples"])
    return asdict(report), {"sampling": "log-uniform"}


def run_operator_check(config):
    return operator_consistency_report(config["c"], config["P"]), {"c": config["c"], "prime_cap": config["P"]}


def _spec(config):
    return TruncationSpec(config["c"], config["T"], config["T0"])


def _curve_output(config, curve):
    frame = curve.to_frame()
    _plot(config, frame, "tau", ["modulus"])
    return frame, {
        "resolution": curve.resolution,
        "min_modulus": curve.min_modulus,
        "argmin_tau": curve.argmin_tau,
        "pole_flag": curve.pole_flag,
        "symbol": curve.symbol,
    }


def run_truncated_spectrum(config):
    curve = truncated_spectrum_curve(_spec(config), config["resolution"], config["offset"], config["puncture"])
    return _curve_output(config, curve)


def run_invertibility(config):
    verdict = truncated_invertibility(_spec(config), config["resolution"])
    return verdict.to_dict(), {"scan_resolution": config["resolution"]}


def run_rh_scan(config):
    off_line = [c for c in config["c"] if c != 0.5]
    frames = []
    if off_line:
        frames.append(rh_diagnostic(off_line, config["tmax"], config["resolution"], config.poolsize, config.verbose))
    if 0.5 in config["c"]:
        frames.append(report_frame([quasi_invertibility_scan(0.5, config["tmax"], config["resolution"])]))
    frame = pd.concat(frames, ignore_index=True).sort_values("c", kind="stable").reset_index(drop=True)
    return frame, {"horizon": config["tmax"], "scan_resolution": config["resolution"]}


def run_global_xi(config):
    curve = global_operator_curve(config["c"], config["T"], config["resolution"], config["puncture"])
    return _curve_output(config, curve)


def run_explicit(config):
    frame = duality_report(config["x"], config["zeros"])
    return frame, {"trivial_zero_term": "+ int_x^inf dt/(t(t^2-1)log t)", "n_zeros": config["zeros"]}


def run_momentum_witness(config):
    frame = approximate_point_spectrum_witness(config["c"], config["tau"], config["widths"], config["shift"])
    _plot(config, frame, "width", ["residual"], logx=True, logy=True)
    return frame, {"grid_step": 2.0 ** -7}


COMMANDS = {
    "zeros": run_zeros,
    "zeta-eval": run_zeta_eval,
    "string-info": run_string_info,
    "tube": run_tube,
    "dims": run_dims,
    "counting": run_counting,
    "spectral-count": run_spectral_count,
    "weyl": run_weyl,
    "lapo": run_lapo,
    "inverse-problem": run_inverse_problem,
    "operator-check": run_operator_check,
    "truncated-spectrum": run_truncated_spectrum,
    "invertibility": run_invertibility,
    "rh-scan": run_rh_scan,
    "global-xi": run_global_xi,
    "explicit": run_explicit,
    "momentum-witness": run_momentum_witness,
}


def build_parser():
    common = _Parser(add_help=False)
    common.add_argument("--out", default=".", help="Output directory.")
    common.add_argument("--format", default="csv", choices=["csv", "json"])
    common.add_argument("--plot", action="store_true", help="Also write a PDF plot where one applies.")
    common.add_argument("--verbose", action="store_true")
    common.add_argument("--poolsize", type=int, default=1, help="Worker processes for parallel scans.")

    parser = _Parser(prog="zetalab", description="Numerical experiments on fractal strings and zeta.")
    parser.add_argument("--version", action="version", version=f"zetalab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name, help_text):
        return sub.add_parser(name, parents=[common], help=help_text)

    def with_string(p):
        p.add_argument("--string", required=True,
                       help="cantor, unit, power:D[:J], lattice:b:m[:depth], lapidus-maier:D:tau:beta[:J], "
                       "inline JSON or a JSON file.")

    def with_window(p):
        p.add_argument("--sigma-min", type=float, default=-1.0)
        p.add_argument("--window-tmax", type=float, default=50.0)

    def with_truncation(p, resolution):
        p.add_argument("--c", type=float, required=True)
        p.add_argument("--T", type=float, required=True)
        p.add_argument("--T0", type=float, default=0.0)
        p.add_argument("--resolution", type=float, default=resolution)

    p = command("zeros", "Critical zeros of zeta up to a height.")
    p.add_argument("--tmax", type=float, default=50.0)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--no-cache", action="store_true")

    p = command("zeta-eval", "Evaluate zeta, zeta' or xi.")
    p.add_argument("--s", type=complex_list, required=True, help="Comma-separated complex points, e.g. 2,0.5+14j.")
    p.add_argument("--function", choices=["zeta", "derivative", "xi"], default="zeta")

    p = command("string-info", "Summary of a fractal string.")
    with_string(p)

    p = command("tube", "Direct tube volumes against the fractal tube formula.")
    with_string(p)
    p.add_argument("--eps-decades", type=int, default=6)
    with_window(p)

    p = command("dims", "Complex dimensions in a window.")
    with_string(p)
    with_window(p)

    p = command("counting", "Geometric counting function against its explicit formula.")
    with_string(p)
    p.add_argument("--x", type=float_list, required=True)
    with_window(p)

    p = command("spectral-count", "Spectral counting function by two methods.")
    with_string(p)
    p.add_argument("--x", type=float_list, required=True)

    p = command("weyl", "Weyl remainder profile.")
    with_string(p)
    p.add_argument("--x-min", type=float, default=10.0)
    p.add_argument("--x-max", type=float, default=1e4)
    p.add_argument("--samples", type=int, default=500)

    p = command("lapo", "Coefficient of x**D in the Weyl remainder of l_j = j**(-1/D).")
    p.add_argument("--D", type=float, required=True)
    p.add_argument("--x-fit", type=float, default=1e5)
    p.add_argument("--samples", type=int, default=2000)

    p = command("inverse-problem", "Geometric against spectral oscillation amplitude.")
    p.add_argument("--D", type=float, required=True)
    p.add_argument("--tau", type=float, required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--x-min", type=float, default=1e5)
    p.add_argument("--x-max", type=float, default=1e8)
    p.add_argument("--samples", type=int, default=8000)

    p = command("operator-check", "Consistency checks of the spectral operator on grids.")
    p.add_argument("--c", type=float, default=2.0)
    p.add_argument("--P", type=int, default=100)

    p = command("truncated-spectrum", "Spectrum curve of the truncated spectral operator.")
    with_truncation(p, 1e-2)
    p.add_argument("--offset", type=float, default=0.0, help="Sample offset inside each cell, in [0, 1).")
    p.add_argument("--puncture", type=float, default=None)

    p = command("invertibility", "Invertibility verdict for a truncation.")
    with_truncation(p, 1e-3)

    p = command("rh-scan", "Quasi-invertibility verdicts over abscissas.")
    p.add_argument("--c", type=float_list, required=True)
    p.add_argument("--tmax", type=float, default=100.0)
    p.add_argument("--resolution", type=float, default=1e-3)

    p = command("global-xi", "Spectrum curve of the global operator xi(d).")
    p.add_argument("--c", type=float, required=True)
    p.add_argument("--T", type=float, required=True)
    p.add_argument("--resolution", type=float, default=1e-2)
    p.add_argument("--puncture", type=float, default=None)

    p = command("explicit", "Prime-power count against the zero reconstruction.")
    p.add_argument("--x", type=float_list, required=True)
    p.add_argument("--zeros", type=int, default=100)

    p = command("momentum-witness", "Approximate eigenfunctions of the infinitesimal shift.")
    p.add_argument("--c", type=float, default=0.5)
    p.add_argument("--tau", type=float, default=3.0)
    p.add_argument("--widths", type=float_list, default=[5.0, 10.0, 20.0, 40.0])
    p.add_argument("--shift", type=float, default=0.0, help="Real offset of the tested point from the line.")
    return parser


def _report_error(err, code):
    json.dump({"error": type(err).__name__, "message": str(err), "exit_code": code}, sys.stderr)
    sys.stderr.write("\n")
    return code


def run(config: ExperimentConfig):
    """Run one validated experiment and write its result file.

    :return: Path of the result file.
    """
    result, disclosures = COMMANDS[config.command](config)
    path = write_result(result, config, disclosures)
    print(f"Wrote {path}")
    return path


def main(argv=None):
    """Console entry point; returns the process exit code."""
    try:
        config = ExperimentConfig.from_namespace(build_parser().parse_args(argv)).validate()
    except (ConfigError, ValueError) as err:
        return _report_error(err, EXIT_INVALID)
    try:
        run(config)
    except ZetaLabError as err:
        return _report_error(err, EXIT_FAILED)
    except ValueError as err:
        return _report_error(err, EXIT_INVALID)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
