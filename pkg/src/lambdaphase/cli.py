"""Command line front end: scenario runs, CSV/SVG emission and verification.

``simulate`` evolves a configured initial state over a grid of rescaled
times and writes one CSV row per grid point; ``verify`` runs the runtime
invariant suites.  Named presets reproduce the weak-field, strong-field
and trapping scenarios at zero detuning.

The rescaled time is tau = g_a t / (2 pi sqrt(nbar_a)), chosen so that
revivals of a strongly driven 1<->3 transition sit near integer tau.
When g_a or nbar_a vanishes the rescaling is degenerate and tau is read
as bare time.

CSV output is deterministic: fixed column order, 17 significant digits,
and a reduction order independent of the worker count, so identical
configurations produce byte-identical files.
"""

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from . import relphase, svgplot
from .dynamics import SystemParams
from .verify import SUITES, run_suite

THREADS_ENV_VAR = "LAMBDAPHASE_THREADS"

COLUMNS = ("tau", "p13_0", "p13_p", "p13_m", "p23_0", "p23_p", "p23_m",
           "p12_0", "p12_p", "p12_m", "pop1", "pop2", "pop3", "norm")

# Per-row sanity bounds checked on every emitted row.
ROW_TOLERANCE = 1e-9


@dataclass(frozen=True)
class RunConfig:
    """One scenario: physics parameters plus grid and output choices.

    ``transitions`` selects which transitions are drawn in the SVG; the
    CSV always carries the full fixed column set.  ``csv``/``svg`` are
    default output paths, overridable on the command line.
    """

    g_a: float
    g_b: float
    nbar_a: float
    nbar_b: float
    c: tuple[complex, complex, complex]
    delta_a: float = 0.0
    delta_b: float = 0.0
    epsilon: float = 1e-10
    tau_max: float = 2.0
    tau_steps: int = 401
    transitions: tuple[str, ...] = ("13", "23", "12")
    csv: str | None = None
    svg: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "c", tuple(complex(x) for x in self.c))
        object.__setattr__(self, "transitions", tuple(str(t) for t in self.transitions))
        if self.tau_max <= 0:
            raise ValueError(f"tau_max must be > 0, got {self.tau_max}")
        if int(self.tau_steps) != self.tau_steps or self.tau_steps < 2:
            raise ValueError(f"tau_steps must be an integer >= 2, got {self.tau_steps}")
        object.__setattr__(self, "tau_steps", int(self.tau_steps))
        if not self.transitions:
            raise ValueError("transitions must name at least one transition")
        for t in self.transitions:
            if t not in relphase.TRANSITIONS:
                raise ValueError(f"transitions: unknown transition {t!r}")
        self.system_params()  # physics field validation, with field names

    def system_params(self) -> SystemParams:
        return SystemParams(g_a=self.g_a, g_b=self.g_b, nbar_a=self.nbar_a,
                            nbar_b=self.nbar_b, c=self.c, delta_a=self.delta_a,
                            delta_b=self.delta_b, epsilon=self.epsilon)


def _parse_amplitude(value, position: int) -> complex:
    if isinstance(value, (int, float)):
        return complex(value)
    if (isinstance(value, (list, tuple)) and len(value) == 2
            and all(isinstance(part, (int, float)) for part in value)):
        return complex(value[0], value[1])
    raise ValueError(f"c[{position}] must be a number or a [re, im] pair, "
                     f"got {value!r}")


def config_from_dict(raw: dict) -> RunConfig:
    """Build a RunConfig from a JSON document, rejecting unknown keys."""
    known = {f.name for f in fields(RunConfig)}
    unknown = sorted(set(raw) - known)
    if unknown:
        raise ValueError(f"unknown config key(s): {', '.join(unknown)}")
    data = dict(raw)
    if "c" in data:
        if not isinstance(data["c"], (list, tuple)) or len(data["c"]) != 3:
            raise ValueError("c must be a list of three amplitudes")
        data["c"] = tuple(_parse_amplitude(v, k) for k, v in enumerate(data["c"]))
    if "transitions" in data:
        data["transitions"] = tuple(data["transitions"])
    missing = sorted({"g_a", "g_b", "nbar_a", "nbar_b", "c"} - set(data))
    if missing:
        raise ValueError(f"missing required config key(s): {', '.join(missing)}")
    return RunConfig(**data)


def load_config(path) -> RunConfig:
    with open(path, "r", encoding="utf-8") as handle:
        raw = json.load(handle)
    if not isinstance(raw, dict):
        raise ValueError("config file must hold a single JSON object")
    return config_from_dict(raw)


def _preset_configs() -> dict[str, RunConfig]:
    ground = (1.0, 0.0, 0.0)
    inv_sqrt2 = 1.0 / math.sqrt(2.0)
    return {
        # Weak field: about one excitation per mode, almost oscillatory.
        "fig2": RunConfig(g_a=1.0, g_b=1.0, nbar_a=1.0, nbar_b=1.0, c=ground,
                          transitions=("13", "23")),
        # Strong a field, weak b field: collapse and revival on 1<->3.
        "fig3a": RunConfig(g_a=1.0, g_b=1.0, nbar_a=50.0, nbar_b=0.5, c=ground,
                           transitions=("13", "23")),
        # Both fields strong.
        "fig3b": RunConfig(g_a=1.0, g_b=1.0, nbar_a=50.0, nbar_b=50.0, c=ground,
                           transitions=("13", "23")),
        # Dark lower-level superposition against equal strong fields.
        "fig4": RunConfig(g_a=1.0, g_b=1.0, nbar_a=50.0, nbar_b=50.0,
                          c=(inv_sqrt2, -inv_sqrt2, 0.0), transitions=("12",)),
    }


PRESETS = _preset_configs()


def time_scale(params: SystemParams) -> float:
    """Seconds of interaction time per unit of rescaled time tau."""
    if params.g_a > 0 and params.nbar_a > 0:
        return 2.0 * math.pi * math.sqrt(params.nbar_a) / params.g_a
    return 1.0


def _worker_count(explicit: int | None) -> int:
    if explicit is not None:
        return max(1, int(explicit))
    raw = os.environ.get(THREADS_ENV_VAR)
    if raw is None:
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        raise ValueError(f"{THREADS_ENV_VAR} must be an integer, got {raw!r}") from None


def _check_rows(data: dict[str, np.ndarray]) -> None:
    for stem in ("p13", "p23", "p12"):
        total = data[f"{stem}_0"] + data[f"{stem}_p"] + data[f"{stem}_m"]
        worst = float(np.max(np.abs(total - 1.0)))
        if worst > ROW_TOLERANCE:
            raise RuntimeError(f"{stem} probabilities sum to 1 only within "
                               f"{worst:.3g}")
    worst = float(np.max(np.abs(data["norm"] - 1.0)))
    if worst > ROW_TOLERANCE:
        raise RuntimeError(f"state norm drifted by {worst:.3g}")


def _fmt(value: float) -> str:
    return f"{value:.17g}"


def write_csv(path, data: dict[str, np.ndarray]) -> None:
    lines = [",".join(COLUMNS)]
    n_rows = len(data["tau"])
    for k in range(n_rows):
        lines.append(",".join(_fmt(float(data[col][k])) for col in COLUMNS))
    with open(path, "w", encoding="utf-8") as handle:
        handle.write("\n".join(lines) + "\n")


def write_svg(path, config: RunConfig, data: dict[str, np.ndarray]) -> None:
    series = []
    for trans in config.transitions:
        stem = "p" + trans
        for suffix in ("0", "p", "m"):
            series.append((f"{stem}_{suffix}", data[f"{stem}_{suffix}"]))
    svgplot.write_line_plot(
        path, data["tau"], series,
        title="Relative-phase probabilities",
        xlabel="rescaled time tau", ylabel="probability")


def run_scenario(config: RunConfig, csv_path=None, svg_path=None,
                 workers: int | None = None) -> dict[str, np.ndarray]:
    """Evolve the configured scenario over its tau grid.

    Writes the CSV (and optional SVG) when a path is configured or given,
    and returns the column arrays keyed as in ``COLUMNS``.
    """
    params = config.system_params()
    taus = np.linspace(0.0, config.tau_max, config.tau_steps)
    times = taus * time_scale(params)
    series = relphase.time_series(params, times, workers=_worker_count(workers))
    data = {"tau": taus}
    for key in relphase.SERIES_KEYS:
        data[key] = series[key]
    _check_rows(data)

    csv_target = csv_path if csv_path is not None else config.csv
    if csv_target:
        write_csv(csv_target, data)
    svg_target = svg_path if svg_path is not None else config.svg
    if svg_target:
        write_svg(svg_target, config, data)
    return data


def _cmd_simulate(args) -> int:
    if args.preset is not None:
        config = PRESETS[args.preset]
    else:
        config = load_config(args.config)
    csv_path = args.out
    if csv_path is None and config.csv is None:
        stem = args.preset if args.preset else Path(args.config).stem
        csv_path = f"{stem}.csv"
    run_scenario(config, csv_path=csv_path, svg_path=args.svg)
    target = csv_path if csv_path is not None else config.csv
    print(f"wrote {config.tau_steps} rows to {target}")
    if args.svg or config.svg:
        print(f"wrote plot to {args.svg or config.svg}")
    return 0


def _cmd_verify(args) -> int:
    results = run_suite(args.suite)
    failures = 0
    for check in results:
        status = "PASS" if check.passed else "FAIL"
        print(f"[{status}] {check.name}: residual {check.residual:.3g} "
              f"(tolerance {check.tolerance:.3g})")
        failures += 0 if check.passed else 1
    total = len(results)
    print(f"{total - failures}/{total} checks passed")
    return 0 if failures == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lambdaphase",
        description="Relative-phase dynamics of a three-level lambda atom "
                    "coupled to two quantized field modes.")
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run a scenario and write CSV/SVG")
    source = sim.add_mutually_exclusive_group(required=True)
    source.add_argument("--config", help="path to a JSON scenario config")
    source.add_argument("--preset", choices=sorted(PRESETS),
                        help="named built-in scenario")
    sim.add_argument("--out", help="CSV output path")
    sim.add_argument("--svg", help="optional SVG line-plot path")
    sim.set_defaults(func=_cmd_simulate)

    ver = sub.add_parser("verify", help="run runtime invariant suites")
    ver.add_argument("--suite", default="all", choices=sorted(SUITES) + ["all"],
                     help="which suite to run (default: all)")
    ver.set_defaults(func=_cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
