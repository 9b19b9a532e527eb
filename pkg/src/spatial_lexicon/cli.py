"""Command-line interface: ``gen-scenes``, ``run`` and ``plot-data``.

Settings come from built-in defaults, then an optional ``--config`` file, then
command-line flags. The config file holds one ``key = value`` pair per line;
keys are the long flag names (``alpha-sigma = 0.2``) and ``#`` starts a comment.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .agent import TIE_POLICIES, LearningParams
from .categories import parse_strategies
from .errors import ConfigError, SpatialLexiconError
from .experiment import ExperimentConfig, emit_csv, emit_plot_data, emit_snapshots, read_csv, run_experiment
from .scenes import LayoutConfig, NoiseModel, generate_corpus, save_corpus

# setting name -> (type, default)
SETTINGS = {
    "strategies": (str, "projective"),
    "learner-strategies": (str, None),
    "inventory": (str, None),
    "runs": (int, 25),
    "interactions": (int, 250),
    "seed": (int, 0),
    "alpha-sigma": (float, 0.1),
    "sample-window": (int, 30),
    "initial-sigma": (float, 0.1),
    "tie-policy": (str, "fixed-priority"),
    "unique-margin": (float, 0.0),
    "verbatim-sigma": (bool, False),
    "noise-angle": (float, 0.05),
    "noise-dist": (float, 0.05),
    "scenes": (int, 800),
    "min-blocks": (int, 2),
    "max-blocks": (int, 2),
    "area-size": (float, 3.0),
    "success-window": (int, 50),
    "pointing-failure": (float, 0.0),
    "corpus": (str, None),
}


def _coerce(key: str, value: str):
    typ = SETTINGS[key][0]
    if typ is bool:
        v = str(value).strip().lower()
        if v in ("1", "true", "yes", "on"):
            return True
        if v in ("0", "false", "no", "off"):
            return False
        raise ConfigError(key, f"expected a boolean, got {value!r}")
    try:
        return typ(value)
    except ValueError:
        raise ConfigError(key, f"expected {typ.__name__}, got {value!r}") from None


def read_config_file(path) -> dict:
    settings = {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError("config", str(exc)) from None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError("config", f"{path}:{lineno}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.replace("_", "-")
        if key not in SETTINGS:
            raise ConfigError(key, f"{path}:{lineno}: unknown setting")
        settings[key] = _coerce(key, value)
    return settings


def resolve_settings(args: argparse.Namespace) -> dict:
    settings = {k: default for k, (_, default) in SETTINGS.items()}
    if getattr(args, "config", None):
        settings.update(read_config_file(args.config))
    for key in SETTINGS:
        value = getattr(args, key.replace("-", "_"), None)
        if value is not None:
            settings[key] = value
    return settings


def noise_from(s: dict) -> NoiseModel:
    return NoiseModel(s["noise-angle"], s["noise-dist"], s["noise-angle"], s["noise-dist"])


def layout_from(s: dict) -> LayoutConfig:
    return LayoutConfig(area_size=s["area-size"], min_blocks=s["min-blocks"], max_blocks=s["max-blocks"])


def experiment_config(s: dict) -> ExperimentConfig:
    def build(field, fn, *a, **kw):
        try:
            return fn(*a, **kw)
        except (ValueError, SpatialLexiconError) as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(field, str(exc)) from None

    learner = s["learner-strategies"]
    config = ExperimentConfig(
        runs=s["runs"],
        interactions=s["interactions"],
        tutor_strategies=build("strategies", parse_strategies, s["strategies"]),
        learner_strategies=build("learner-strategies", parse_strategies, learner) if learner else None,
        inventory=s["inventory"],
        corpus=s["corpus"],
        n_scenes=s["scenes"],
        noise=build("noise", noise_from, s),
        layout=build("layout", layout_from, s),
        params=build("learning", LearningParams,
                     alpha_sigma=s["alpha-sigma"], sample_window=s["sample-window"],
                     initial_sigma=s["initial-sigma"], tie_policy=s["tie-policy"],
                     unique_margin=s["unique-margin"], verbatim_sigma_update=s["verbatim-sigma"]),
        seed=s["seed"],
        success_window=s["success-window"],
        pointing_failure=s["pointing-failure"],
    )
    config.validate()
    return config


def _add_scene_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int)
    p.add_argument("--noise-angle", type=float, help="bearing noise std. dev. in radians (default 0.05)")
    p.add_argument("--noise-dist", type=float, help="relative range noise std. dev. (default 0.05)")
    p.add_argument("--scenes", type=int, help="number of scenes to generate (default 800)")
    p.add_argument("--min-blocks", type=int)
    p.add_argument("--max-blocks", type=int)
    p.add_argument("--area-size", type=float, help="side of the square scene area in metres")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spatial-lexicon", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen-scenes", help="generate a synthetic scene corpus")
    gen.add_argument("--config")
    gen.add_argument("--out", required=True)
    _add_scene_flags(gen)

    run = sub.add_parser("run", help="run an acquisition experiment and write per-interaction metrics")
    run.add_argument("--config")
    run.add_argument("--out", default="-", help="metrics CSV path ('-' for stdout)")
    run.add_argument("--corpus", help="scene corpus file; generated in memory when omitted")
    run.add_argument("--strategies", help="tutor strategies, comma separated (default projective)")
    run.add_argument("--learner-strategies", help="learner strategies (default: the tutor's)")
    run.add_argument("--inventory", help="tutor inventory file (word strategy prototype sigma)")
    run.add_argument("--runs", type=int)
    run.add_argument("--interactions", type=int)
    run.add_argument("--alpha-sigma", type=float)
    run.add_argument("--sample-window", type=int)
    run.add_argument("--initial-sigma", type=float)
    run.add_argument("--tie-policy", choices=TIE_POLICIES)
    run.add_argument("--unique-margin", type=float)
    run.add_argument("--verbatim-sigma", action="store_const", const=True,
                     help="apply the sigma update with its literal sign")
    run.add_argument("--success-window", type=int)
    run.add_argument("--pointing-failure", type=float)
    run.add_argument("--plot-data", help="also write cross-run mean/std series here")
    run.add_argument("--snapshot", help="write final learner categories (CSV) here")
    run.add_argument("--trace", help="write a step-by-step log of every game here")
    run.add_argument("--jobs", type=int, default=1)
    _add_scene_flags(run)

    plot = sub.add_parser("plot-data", help="aggregate a metrics CSV into per-interaction mean/std")
    plot.add_argument("metrics")
    plot.add_argument("--out", default="-")
    return parser


def _target(path: str):
    return sys.stdout if path == "-" else path


def cmd_gen_scenes(args) -> None:
    s = resolve_settings(args)
    scenes = generate_corpus(s["scenes"], s["seed"], noise_from(s), layout_from(s))
    save_corpus(scenes, args.out)


def cmd_run(args) -> None:
    config = experiment_config(resolve_settings(args))
    trace = [] if args.trace else None
    result = run_experiment(config, jobs=args.jobs, trace=trace)
    records = result.records
    emit_csv(records, _target(args.out))
    if args.plot_data:
        emit_plot_data(records, args.plot_data)
    if args.snapshot:
        emit_snapshots(result.snapshots(), args.snapshot)
    if trace is not None:
        Path(args.trace).write_text("\n".join(trace) + "\n", encoding="utf-8")


def cmd_plot_data(args) -> None:
    emit_plot_data(read_csv(args.metrics), _target(args.out))


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handler = {"gen-scenes": cmd_gen_scenes, "run": cmd_run, "plot-data": cmd_plot_data}[args.command]
    try:
        handler(args)
    except (SpatialLexiconError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
