"""Command-line front end producing the figure datasets and simulation reports.

Every command writes CSV (one header row, floats with 17 significant digits)
to ``--out`` or standard output. Parameters come from, in increasing order of
precedence, built-in defaults, a JSON object given with ``--config`` and the
command-line flags. Exit status is 0 on success, 2 for usage errors and 1 for
domain errors (or a simulation alarm under ``--strict``).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .chernoff import asymptotic_error, rescaled_chernoff_zeta
from .codes import (Codeword, gv_rate, map_coherent_to_twophoton_distance,
                    modified_gv_rate, overhead_ratio, worst_case_pair)
from .decision import decide, expected_two_click_count, log_exact_error_probability
from .errors import FingerprintError
from .imperfections import (SourceParams, coincidence_fraction, hypothesis_pair,
                            two_click_probability)
from .information import AVERAGE, CONDITIONAL, crossover_length, information_at
from .interference import visibility
from .montecarlo import batch_to_json, simulate_batch

PROG = "hom-fingerprint"
BOUNDS_DELTA_MAX = 0.25


class UsageError(Exception):
    """Invalid options or configuration; maps to exit status 2."""


@dataclass(frozen=True)
class Option:
    name: str
    type: type
    default: object
    help: str

    @property
    def flag(self) -> str:
        return "--" + self.name.replace("_", "-")


def _bits(text):
    Codeword.from_string(text)
    return text


def _convention(text):
    if text not in (CONDITIONAL, AVERAGE):
        raise ValueError(f"expected {CONDITIONAL!r} or {AVERAGE!r}")
    return text


OPTIONS = {
    "bounds": [
        Option("delta_lo", float, 0.0025, "smallest delta_coh of the grid"),
        Option("delta_hi", float, 0.25, "largest delta_coh of the grid (at most 0.25)"),
        Option("points", int, 100, "number of grid points"),
    ],
    "information": [
        Option("n_lo", float, 1e2, "smallest input length"),
        Option("n_hi", float, 1e12, "largest input length"),
        Option("points", int, 41, "number of log-spaced lengths"),
        Option("p_err", float, 1e-6, "target error probability"),
        Option("delta_coh", float, 0.2, "minimum relative distance of the coherent-state code"),
        Option("convention", _convention, CONDITIONAL,
               "meaning of p_err: 'conditional' misidentification or 'average' error"),
    ],
    "error": [
        Option("x_hi", float, 500.0, "largest (eta*nbar)^2 N"),
        Option("points", int, 50, "number of log-spaced x values starting at 1"),
        Option("eta_nbar", float, 0.01, "detected mean photon number per party"),
        Option("delta_min", float, 0.1, "worst-case relative distance"),
        Option("dark_ratio", float, 0.01, "dark counts per detector relative to eta_nbar"),
        Option("w", float, 0.98, "indistinguishability"),
    ],
    "chernoff-surface": [
        Option("dark_lo", float, 0.0, "smallest dark ratio"),
        Option("dark_hi", float, 0.05, "largest dark ratio"),
        Option("dark_points", int, 20, "number of dark-ratio values"),
        Option("delta_lo", float, 0.1, "smallest Delta_min"),
        Option("delta_hi", float, 0.25, "largest Delta_min"),
        Option("delta_points", int, 20, "number of Delta_min values"),
        Option("w", float, 0.98, "indistinguishability"),
    ],
    "simulate": [
        Option("eta_nbar", float, 0.05, "detected mean photon number per party"),
        Option("g2", float, 0.0, "second-order correlation of the sources"),
        Option("dark_ratio", float, 0.01, "dark counts per detector relative to eta_nbar"),
        Option("w", float, 0.98, "indistinguishability"),
        Option("delta_min", float, 0.1, "worst-case distance used by the decision rule"),
        Option("length", int, 1000, "length of the synthetic worst-case codeword pair"),
        Option("code_a", _bits, None, "first codeword as a bit string"),
        Option("code_b", _bits, None, "second codeword as a bit string"),
        Option("n_runs", int, 1_000_000, "number of runs"),
        Option("alarm", float, 4.0, "z-score beyond which --strict fails"),
        Option("tally_out", str, None, "JSON tally path (default: --out with .json suffix)"),
    ],
}

COMMON = [
    Option("seed", int, 0, "random seed"),
    Option("threads", int, None, "worker threads (default: HOM_FINGERPRINT_THREADS or 1)"),
]


def fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    return str(value)


def to_csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    return buf.getvalue()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog=PROG, description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for command, options in OPTIONS.items():
        sp = sub.add_parser(command, help=COMMANDS[command].__doc__.splitlines()[0])
        sp.add_argument("--out", type=Path, default=None, help="output path (default: stdout)")
        sp.add_argument("--config", type=Path, default=None, help="JSON object of parameters")
        sp.add_argument("--strict", action="store_true", default=None,
                        help="treat validation alarms as failures")
        for opt in COMMON + options:
            # None marks "not given" so the config file can fill the value.
            sp.add_argument(opt.flag, dest=opt.name, type=opt.type, default=None,
                            help=f"{opt.help} (default: {opt.default})")
    return parser


def resolve(command: str, args: argparse.Namespace) -> dict:
    """Merge defaults, the ``--config`` file and explicit flags."""
    options = {o.name: o for o in COMMON + OPTIONS[command]}
    options["strict"] = Option("strict", bool, False, "")
    params = {name: o.default for name, o in options.items()}
    if args.config is not None:
        try:
            loaded = json.loads(args.config.read_text())
        except (OSError, ValueError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from None
        if not isinstance(loaded, dict):
            raise UsageError("config must be a JSON object")
        for key, value in loaded.items():
            if key not in options:
                raise UsageError(f"unknown config key {key!r} for {command}")
            if value is None:
                params[key] = None
                continue
            opt = options[key]
            if opt.type in (int, float) and isinstance(value, bool):
                raise UsageError(f"config key {key!r} must be a number")
            try:
                converted = opt.type(value)
            except (TypeError, ValueError) as exc:
                raise UsageError(f"bad value for config key {key!r}: {exc}") from None
            if opt.type is int and converted != value:
                raise UsageError(f"config key {key!r} must be an integer")
            params[key] = converted
    for name in options:
        value = getattr(args, name, None)
        if value is not None:
            params[name] = value
    return params


def _grid(lo, hi, points, name, log=False):
    if points < 1:
        raise UsageError(f"{name}: need at least one point")
    if not lo <= hi or (points > 1 and lo == hi):
        raise UsageError(f"{name}: need lo < hi")
    if points == 1:
        return np.array([lo])
    if log:
        return np.geomspace(lo, hi, points)
    return np.linspace(lo, hi, points)


def cmd_bounds(params):
    """Code rates and the two-photon sequence-length overhead."""
    lo, hi = params["delta_lo"], params["delta_hi"]
    if not (0.0 < lo and hi <= BOUNDS_DELTA_MAX):
        raise UsageError(f"delta grid must lie in (0, {BOUNDS_DELTA_MAX}]")
    header = ["delta_coh", "Delta_min", "r_gv", "R_gv", "overhead"]
    rows = []
    for d in _grid(lo, hi, params["points"], "delta"):
        d = float(d)
        Delta = map_coherent_to_twophoton_distance(d)
        rows.append([d, Delta, gv_rate(d), modified_gv_rate(Delta), overhead_ratio(d)])
    return to_csv(header, rows)


def cmd_information(params):
    """Information carried by each protocol against the classical bound."""
    if params["n_lo"] < 1:
        raise UsageError("n grid must start at 1 or above")
    grid = _grid(params["n_lo"], params["n_hi"], params["points"], "n", log=True)
    p_err, delta, conv = params["p_err"], params["delta_coh"], params["convention"]
    header = ["row", "n", "I_class", "I_S", "I_coh", "ratio"]
    rows = []
    for n in sorted({int(round(x)) for x in grid}):
        r = information_at(n, p_err, delta, conv)
        rows.append(["grid", n, r.i_class, r.i_s, r.i_coh, r.ratio])
    cross = crossover_length(p_err, delta, conv)
    for label, n in (("crossover_S", cross.n_twophoton), ("crossover_coh", cross.n_coherent)):
        r = information_at(n, p_err, delta, conv)
        rows.append([label, n, r.i_class, r.i_s, r.i_coh, r.ratio])
    return to_csv(header, rows)


def error_sources(params):
    """Single-photon and Poissonian sources sharing the other parameters."""
    base = dict(eta_nbar=params["eta_nbar"], dark_ratio=params["dark_ratio"], w=params["w"])
    return SourceParams(g2=0.0, **base), SourceParams(g2=1.0, **base)


def cmd_error(params):
    """Exact and asymptotic error probabilities against (eta*nbar)^2 N."""
    if params["x_hi"] < 1.0:
        raise UsageError("x_hi must be at least 1")
    eta2 = params["eta_nbar"] ** 2
    if eta2 == 0.0:
        raise FingerprintError("eta_nbar must be positive")
    xs = [0.0] + [float(x) for x in _grid(1.0, params["x_hi"], params["points"], "x", log=True)]
    header = ["x"]
    for tag in ("s", "p"):
        header += [f"n2_{tag}", f"perr_exact_{tag}", f"perr_asym_{tag}",
                   f"inset_{tag}", f"zeta_{tag}"]
    rows = []
    sources = [(p, hypothesis_pair(p, params["delta_min"]),
                rescaled_chernoff_zeta(p, params["delta_min"])) for p in error_sources(params)]
    for x in xs:
        row = [x]
        for p, hp, zeta in sources:
            n2 = expected_two_click_count(hp.p2, x / eta2)
            log_perr = log_exact_error_probability(n2, hp)
            inset = -log_perr / x if x > 0 else math.nan
            row += [n2, math.exp(log_perr), asymptotic_error(x / eta2, params["eta_nbar"], zeta),
                    inset, zeta]
        rows.append(row)
    return to_csv(header, rows)


def cmd_chernoff_surface(params):
    """Rescaled Chernoff information over dark ratio and Delta_min."""
    darks = _grid(params["dark_lo"], params["dark_hi"], params["dark_points"], "dark")
    deltas = _grid(params["delta_lo"], params["delta_hi"], params["delta_points"], "delta")
    header = ["dark_ratio", "Delta_min", "zeta_s", "zeta_p", "ratio"]
    rows = []
    for r in darks:
        # eta_nbar only sets the scale the rescaled exponent divides out.
        ps = SourceParams(0.01, 0.0, float(r), params["w"])
        pp = SourceParams(0.01, 1.0, float(r), params["w"])
        for d in deltas:
            zs = rescaled_chernoff_zeta(ps, float(d))
            zp = rescaled_chernoff_zeta(pp, float(d))
            rows.append([float(r), float(d), zs, zp, zs / zp])
    return to_csv(header, rows)


def _z(observed, expected, se):
    if se > 0.0:
        return (observed - expected) / se
    return 0.0 if observed == expected else math.inf


def simulate_report(params):
    """Run the simulation; returns ``(csv_text, json_text, worst_z)``."""
    p = SourceParams(params["eta_nbar"], params["g2"], params["dark_ratio"], params["w"])
    if (params["code_a"] is None) != (params["code_b"] is None):
        raise UsageError("give both code_a and code_b or neither")
    if params["code_a"] is not None:
        a = Codeword.from_string(params["code_a"])
        b = Codeword.from_string(params["code_b"])
    else:
        a, b = worst_case_pair(params["delta_min"], params["length"])
    v = visibility(a, b)
    n_runs = params["n_runs"]
    tally = simulate_batch(p, v, n_runs, params["seed"], params["threads"])
    hp = hypothesis_pair(p, params["delta_min"])
    outcome = decide(tally.n_coincidence, tally.n_two_click, hp)

    q_model = coincidence_fraction(p, v)
    n2 = tally.n_two_click
    q_emp = tally.coincidence_fraction if n2 else math.nan
    q_se = math.sqrt(q_model * (1.0 - q_model) / n2) if n2 else math.nan
    z_q = _z(q_emp, q_model, q_se) if n2 else 0.0

    rate_model = two_click_probability(p)
    rate_emp = n2 / n_runs
    rate_se = math.sqrt(rate_model * (1.0 - rate_model) / n_runs)
    # Leading-order model: allow a relative error of 2*eta_nbar before alarming.
    excess = max(0.0, abs(rate_emp - rate_model) - 2.0 * p.eta_nbar * rate_model)
    z_rate_excess = _z(excess, 0.0, rate_se)

    header = ["n_runs", "seed", "v", "n_coincidence", "n_double", "n_two_click",
              "q_empirical", "q_model", "q_se", "z_q",
              "rate_empirical", "rate_model", "rate_se", "z_rate", "z_rate_excess",
              "decision"]
    row = [n_runs, params["seed"], v, tally.n_coincidence, tally.n_double, n2,
           q_emp, q_model, q_se, z_q,
           rate_emp, rate_model, rate_se, _z(rate_emp, rate_model, rate_se), z_rate_excess,
           outcome.decision.value]
    worst = max(abs(z_q), z_rate_excess)
    return to_csv(header, [row]), batch_to_json(p, v, n_runs, params["seed"], tally), worst


def cmd_simulate(params):
    """Monte Carlo tally compared with the analytic event rates."""
    text, tally_json, worst = simulate_report(params)
    tally_path = params["tally_out"]
    if tally_path is None and params.get("_out") is not None:
        tally_path = Path(params["_out"]).with_suffix(".json")
    if tally_path is not None:
        _write(Path(tally_path), tally_json + "\n")
    if params["strict"] and worst > params["alarm"]:
        print(f"{PROG} simulate: z-score {worst:.3g} exceeds alarm {params['alarm']:g}",
              file=sys.stderr)
        return text, 1
    return text, 0


COMMANDS = {
    "bounds": cmd_bounds,
    "information": cmd_information,
    "error": cmd_error,
    "chernoff-surface": cmd_chernoff_surface,
    "simulate": cmd_simulate,
}


def _write(path: Path, text: str):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _origin(exc: BaseException) -> str:
    """Module in which an exception was raised, for error messages."""
    tb = exc.__traceback__
    name = None
    while tb is not None:
        name = tb.tb_frame.f_globals.get("__name__", name)
        tb = tb.tb_next
    return (name or "?").rsplit(".", 1)[-1]


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        params = resolve(args.command, args)
        params["_out"] = args.out
        result = COMMANDS[args.command](params)
    except UsageError as exc:
        print(f"{PROG} {args.command}: usage error: {exc}", file=sys.stderr)
        return 2
    except (FingerprintError, ValueError) as exc:
        print(f"{PROG} {args.command}: error in {_origin(exc)}: {exc}", file=sys.stderr)
        return 1
    text, status = result if isinstance(result, tuple) else (result, 0)
    if args.out is None:
        sys.stdout.write(text)
    else:
        _write(args.out, text)
    return status


if __name__ == "__main__":
    raise SystemExit(main())
