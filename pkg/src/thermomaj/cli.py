"""Command-line interface: ``thermomaj <command> [flags]``.

Data goes to ``--out`` or stdout; diagnostics go to stderr.  Exit status is
0 on success, 1 on a numeric/domain error and 2 on a usage error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .core import (EnergySpectrum, PopulationVector, ThermalContext, gibbs_state,
                   partition_function, validate_population)
from .errors import PopulationError, ThermoError, UsageError
from .lorenz import build_curve, thermomajorizes
from .model import PhotoswitchParams, single_molecule_model, two_molecule_model
from .modes import Block, CoherentBlockState, diagonalize_blocks
from .optimize import oracle_qy, qy_any, qy_both, qy_single
from .sweep import (AdvantageMap, advantage_map, fit_ridge, gap_sweep, make_grid,
                    ridge_extract)

COMMANDS = ("lorenz", "check", "yield", "sweep-gap", "map2d", "fit-ridge", "gibbs")
DEFAULT_FORMAT = {"lorenz": "csv", "check": "text", "yield": "json", "sweep-gap": "csv",
                  "map2d": "csv", "fit-ridge": "json", "gibbs": "json"}


def fmt(value: float) -> str:
    return format(float(value), ".12g")


def _round(obj):
    if isinstance(obj, float):
        return float(fmt(obj))
    if isinstance(obj, dict):
        return {k: _round(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round(v) for v in obj]
    return obj


def to_json(obj) -> str:
    return json.dumps(_round(obj)) + "\n"


def to_csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


@dataclass
class RunConfig:
    command: str
    params: PhotoswitchParams
    beta: float
    output_path: str | None = None
    format: str | None = None
    oracle: bool = False
    resolution: float | None = None
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if self.resolution is not None and not 0 < self.resolution < 1:
            raise UsageError(f"--resolution must lie in (0, 1), got {self.resolution}")
        if self.command == "fit-ridge" and not self.options.get("map"):
            raise UsageError("fit-ridge requires --map")
        self.format = self.format or DEFAULT_FORMAT[self.command]


def _spectrum_for(config: RunConfig) -> EnergySpectrum:
    opts = config.options
    if opts.get("spectrum"):
        return EnergySpectrum.from_json(Path(opts["spectrum"]).read_text())
    builder = two_molecule_model if opts.get("two_molecule") else single_molecule_model
    return builder(config.params.e1, config.params.delta_e)


def parse_state_file(path: str | Path, spectrum: EnergySpectrum | None = None, *,
                     fallback: EnergySpectrum | None = None
                     ) -> CoherentBlockState | PopulationVector:
    return load_state(path, spectrum, fallback=fallback)[0]


def load_state(path: str | Path, spectrum: EnergySpectrum | None = None, *,
               fallback: EnergySpectrum | None = None):
    """Read a state file: a bare JSON array of populations, or an object
    ``{"diag": [...], "blocks": [{"i", "j", "re", "im"}], "spectrum": {...}}``.

    The spectrum is `spectrum` if given, else the one embedded in the file,
    else `fallback`.  A bare array (or an object without blocks) yields a
    :class:`PopulationVector`.  Errors name the offending JSON path.
    Returns ``(state, spectrum)``.
    """
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except FileNotFoundError:
        raise UsageError(f"{path}: no such file") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: malformed JSON ({exc})") from None
    if isinstance(data, dict) and spectrum is None and "spectrum" in data:
        spectrum = EnergySpectrum.from_dict(data["spectrum"])
    spectrum = spectrum or fallback
    if spectrum is None:
        raise UsageError(f"{path}: no spectrum given")
    if isinstance(data, list):
        data = {"diag": data}
    if not isinstance(data, dict) or not isinstance(data.get("diag"), list):
        raise UsageError(f"{path}: $.diag must be an array of numbers")
    try:
        diag = PopulationVector([float(v) for v in data["diag"]])
    except (TypeError, ValueError):
        raise UsageError(f"{path}: $.diag must be an array of numbers") from None
    problem = validate_population(diag, spectrum)
    if problem:
        raise PopulationError(f"{path}: $.diag: {problem}")
    raw_blocks = data.get("blocks", [])
    if not raw_blocks:
        return diag, spectrum
    blocks = []
    for k, b in enumerate(raw_blocks):
        try:
            block = Block(int(b["i"]), int(b["j"]), complex(float(b.get("re", 0.0)),
                                                            float(b.get("im", 0.0))))
        except (KeyError, TypeError, ValueError) as exc:
            raise UsageError(f"{path}: $.blocks[{k}]: malformed block ({exc})") from None
        try:
            CoherentBlockState(spectrum, diag, (block,))
        except ThermoError as exc:
            raise type(exc)(f"{path}: $.blocks[{k}]: {exc}") from None
        blocks.append(block)
    try:
        return CoherentBlockState(spectrum, diag, tuple(blocks)), spectrum
    except ThermoError as exc:
        raise type(exc)(f"{path}: $.blocks: {exc}") from None


def _load_diagonal(path: str, config: RunConfig):
    explicit = _spectrum_for(config) if config.options.get("spectrum") else None
    fallback = None if explicit else _spectrum_for(config)
    state, spectrum = load_state(path, explicit, fallback=fallback)
    if isinstance(state, CoherentBlockState):
        state, _ = diagonalize_blocks(state)
    return state, spectrum


def _cmd_lorenz(config, ctx):
    diag, spectrum = _load_diagonal(config.options["state"], config)
    curve = build_curve(diag, spectrum, ctx)
    if config.format == "json":
        return to_json({"knots": [[x, y] for x, y in curve.knots]})
    return to_csv(("x", "y"), curve.knots)


def _cmd_check(config, ctx):
    p, sp = _load_diagonal(config.options["initial"], config)
    q, sq = _load_diagonal(config.options["final"], config)
    result = thermomajorizes(build_curve(p, sp, ctx), build_curve(q, sq, ctx))
    if config.format == "json":
        return to_json({"thermomajorizes": result})
    return ("true" if result else "false") + "\n"


def _cmd_yield(config, ctx):
    definition = config.options.get("definition", "both")
    params = config.params
    if config.oracle:
        symmetric = not config.options.get("no_symmetry")
        resolution = config.resolution or (0.01 if symmetric or definition == "single" else 0.05)
        report = oracle_qy(params, ctx, definition, resolution, use_symmetry=symmetric)
    elif definition == "single":
        report = qy_single(params.e1, params.delta_e, params.p, ctx)
    elif definition == "any":
        report = qy_any(params, ctx)
    else:
        report = qy_both(params, ctx)
    if config.format == "csv":
        return to_csv(("definition", "value"), [(report.definition, report.value)])
    return to_json(report.to_dict())


def _grid(config, prefix):
    o = config.options
    return make_grid(o[f"{prefix}_min"], o[f"{prefix}_max"], o[f"{prefix}_step"])


def _cmd_sweep_gap(config, ctx):
    o = config.options
    lam_hi = o["lambda_hi"] if o.get("lambda_hi") is not None else 0.2
    lam_lo = o["lambda_lo"] if o.get("lambda_lo") is not None else 0.02
    rows = gap_sweep(config.params.e1, config.params.p, lam_hi, lam_lo,
                     _grid(config, "gap"), ctx)
    if config.format == "json":
        return to_json([dict(zip(r.FIELDS, r.as_tuple())) for r in rows])
    return to_csv(rows[0].FIELDS if rows else (), [r.as_tuple() for r in rows])


def _cmd_map2d(config, ctx):
    amap = advantage_map(config.params.e1, _grid(config, "p"), _grid(config, "gap"), ctx)
    if config.format == "json":
        return to_json({"p_grid": amap.p_grid.tolist(), "gap_grid": amap.gap_grid.tolist(),
                        "delta": amap.delta.tolist()})
    return to_csv(("p", "beta_delta_e", "delta"), amap.long_rows())


def read_map_csv(path: str | Path) -> AdvantageMap:
    try:
        with open(path, newline="") as fh:
            reader = csv.DictReader(fh)
            rows = [(r["p"], r["beta_delta_e"], r["delta"]) for r in reader]
    except FileNotFoundError:
        raise UsageError(f"{path}: no such file") from None
    except (KeyError, TypeError):
        raise UsageError(f"{path}: expected columns p,beta_delta_e,delta") from None
    return AdvantageMap.from_long_rows(rows)


def _cmd_fit_ridge(config, ctx):
    points = ridge_extract(read_map_csv(config.options["map"]))
    fit = fit_ridge(points, ctx)
    ridge_out = config.options.get("ridge_out")
    if ridge_out:
        Path(ridge_out).write_text(to_csv(("p", "beta_delta_e_star"),
                                          [(p, g) for g, p in points]))
    if config.format == "csv":
        return to_csv(("p0", "residual"), [(fit.p0, fit.residual)])
    return to_json({"p0": fit.p0, "residual": fit.residual})


def _cmd_gibbs(config, ctx):
    spectrum = _spectrum_for(config)
    g = gibbs_state(spectrum, ctx)
    if config.format == "csv":
        return to_csv(("label", "energy", "prob"),
                      [(lab, float(e), float(v))
                       for lab, e, v in zip(spectrum.labels, spectrum.energies, g.probs)])
    return to_json({"labels": list(spectrum.labels), "probs": g.to_list(),
                    "partition_function": partition_function(spectrum, ctx)})


HANDLERS = {"lorenz": _cmd_lorenz, "check": _cmd_check, "yield": _cmd_yield,
            "sweep-gap": _cmd_sweep_gap, "map2d": _cmd_map2d, "fit-ridge": _cmd_fit_ridge,
            "gibbs": _cmd_gibbs}


def run(config: RunConfig) -> str:
    """Execute `config` and return the emitted text (also written to ``output_path``)."""
    ctx = ThermalContext(config.beta)
    text = HANDLERS[config.command](config, ctx)
    if config.output_path:
        with open(config.output_path, "w", newline="") as fh:
            fh.write(text)
    return text


def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--e1", type=float, default=2.48, help="excitation energy E1 [eV]")
    shared.add_argument("--delta-e", type=float, default=1.39, help="cis-trans gap [eV]")
    shared.add_argument("--p", type=float, default=0.7, help="excitation probability")
    shared.add_argument("--lambda", dest="lam", type=float, default=0.0,
                        help="coherence magnitude, 0..p/2")
    shared.add_argument("--beta", type=float, default=1.0, help="inverse temperature [1/eV]")
    shared.add_argument("--format", choices=("csv", "json"))
    shared.add_argument("--out", help="write output here instead of stdout")

    spectrum = argparse.ArgumentParser(add_help=False)
    spectrum.add_argument("--two-molecule", action="store_true",
                          help="use the 9-level two-molecule spectrum")
    spectrum.add_argument("--spectrum", help="JSON spectrum file overriding the model")

    def grid(sub, name, lo, hi, step):
        sub.add_argument(f"--{name}-min", type=float, default=lo)
        sub.add_argument(f"--{name}-max", type=float, default=hi)
        sub.add_argument(f"--{name}-step", type=float, default=step)

    parser = argparse.ArgumentParser(prog="thermomaj", description=__doc__.splitlines()[0])
    subs = parser.add_subparsers(dest="command", required=True)

    sub = subs.add_parser("lorenz", parents=[shared, spectrum], help="Lorenz curve knots")
    sub.add_argument("--state", required=True)

    sub = subs.add_parser("check", parents=[shared, spectrum],
                          help="does INITIAL thermomajorize FINAL")
    sub.add_argument("--initial", required=True)
    sub.add_argument("--final", required=True)

    sub = subs.add_parser("yield", parents=[shared], help="optimal quantum yield")
    sub.add_argument("--def", dest="definition", choices=("any", "both", "single"),
                     default="both")
    sub.add_argument("--oracle", action="store_true", help="use the brute-force grid search")
    sub.add_argument("--resolution", type=float)
    sub.add_argument("--no-symmetry", action="store_true",
                     help="oracle: search the full 9-level grid")

    sub = subs.add_parser("sweep-gap", parents=[shared], help="yields versus beta*dE")
    grid(sub, "gap", 0.0, 6.0, 0.05)
    sub.add_argument("--lambda-hi", type=float)
    sub.add_argument("--lambda-lo", type=float)

    sub = subs.add_parser("map2d", parents=[shared], help="coherence advantage map")
    grid(sub, "p", 0.05, 0.95, 0.05)
    grid(sub, "gap", 0.0, 6.0, 0.05)

    sub = subs.add_parser("fit-ridge", parents=[shared], help="fit p = p0 (e^g - 1)")
    sub.add_argument("--map", required=True, help="long-form map CSV from map2d")
    sub.add_argument("--ridge-out", help="also write ridge points CSV here")

    subs.add_parser("gibbs", parents=[shared, spectrum], help="thermal state")
    return parser


_OPTION_KEYS = ("state", "initial", "final", "definition", "no_symmetry", "two_molecule",
                "spectrum", "map", "ridge_out", "lambda_hi", "lambda_lo",
                "gap_min", "gap_max", "gap_step", "p_min", "p_max", "p_step")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        params = PhotoswitchParams(args.e1, args.delta_e, args.p, args.lam)
        config = RunConfig(
            command=args.command, params=params, beta=args.beta, output_path=args.out,
            format=args.format, oracle=getattr(args, "oracle", False),
            resolution=getattr(args, "resolution", None),
            options={k: getattr(args, k) for k in _OPTION_KEYS if hasattr(args, k)})
    except UsageError as exc:
        parser.error(str(exc))
    except ThermoError as exc:
        print(f"thermomaj: error: {exc}", file=sys.stderr)
        return 1
    try:
        text = run(config)
    except (ThermoError, OSError) as exc:
        print(f"thermomaj: error: {exc}", file=sys.stderr)
        return 1
    if not config.output_path:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
