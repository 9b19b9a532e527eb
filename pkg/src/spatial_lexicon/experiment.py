"""Experiment orchestration and the acquisition measures."""

from __future__ import annotations

import contextlib
import csv
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .agent import Agent, LearningParams
from .categories import SpatialCategory, StrategyKind, category_similarity, default_inventory, load_inventory
from .errors import ConfigError, InvalidArgument
from .game import InteractionOutcome, run_interaction
from .scenes import LayoutConfig, NoiseModel, Scene, generate_corpus, load_corpus

CSV_COLUMNS = (
    "run", "interaction", "success", "windowed_success", "n_categories",
    "interpretation_similarity", "failure_reason", "word", "strategy_guessed",
)
PLOT_COLUMNS = (
    "interaction",
    "success_mean", "success_std",
    "categories_mean", "categories_std",
    "similarity_mean", "similarity_std",
)


@dataclass(frozen=True)
class ExperimentConfig:
    runs: int = 25
    interactions: int = 250
    tutor_strategies: tuple[StrategyKind, ...] = (StrategyKind.PROJECTIVE,)
    # None: same as the tutor's
    learner_strategies: tuple[StrategyKind, ...] | None = None
    inventory: str | None = None
    corpus: str | None = None
    n_scenes: int = 800
    noise: NoiseModel = field(default_factory=NoiseModel)
    layout: LayoutConfig = field(default_factory=LayoutConfig)
    params: LearningParams = field(default_factory=LearningParams)
    seed: int = 0
    success_window: int = 50
    pointing_failure: float = 0.0

    def validate(self) -> None:
        if self.runs < 1:
            raise ConfigError("runs", "must be >= 1")
        if self.interactions < 0:
            raise ConfigError("interactions", "must be >= 0")
        if self.success_window < 1:
            raise ConfigError("success_window", "must be >= 1")
        if self.n_scenes < 1:
            raise ConfigError("n_scenes", "must be >= 1")
        if not 0.0 <= self.pointing_failure <= 1.0:
            raise ConfigError("pointing_failure", "must be in [0, 1]")
        if not self.tutor_strategies and self.inventory is None:
            raise ConfigError("tutor_strategies", "tutor needs at least one strategy or an inventory file")
        if self.learner_strategies is not None and not self.learner_strategies:
            raise ConfigError("learner_strategies", "learner needs at least one strategy")

    def tutor_inventory(self) -> list[tuple[str, SpatialCategory]]:
        if self.inventory is not None:
            return load_inventory(self.inventory)
        return default_inventory(self.tutor_strategies)

    def learner_kinds(self, inventory) -> tuple[StrategyKind, ...]:
        if self.learner_strategies is not None:
            return self.learner_strategies
        kinds = []
        for _, cat in inventory:
            if cat.strategy not in kinds:
                kinds.append(cat.strategy)
        return tuple(kinds)


@dataclass(frozen=True)
class MetricsRecord:
    run: int
    interaction: int
    success: int
    windowed_success: float
    n_categories: int
    interpretation_similarity: float
    failure_reason: str
    word: str
    strategy_guessed: str


@dataclass
class RunResult:
    run: int
    records: list[MetricsRecord]
    outcomes: list[InteractionOutcome]
    tutor: Agent
    learner: Agent


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    runs: list[RunResult]

    @property
    def records(self) -> list[MetricsRecord]:
        return [r for run in self.runs for r in run.records]

    def snapshots(self) -> list[dict]:
        rows = []
        for run in self.runs:
            for row in run.learner.snapshot():
                rows.append({"run": run.run, **row})
        return rows


# -- measures ----------------------------------------------------------------

def communicative_success(outcomes: Iterable, window: int) -> list[float]:
    """Trailing-window mean of success (1.0) / failure (0.0).

    Accepts outcomes or plain booleans. The first ``window - 1`` entries are
    averaged over however many outcomes exist so far.
    """
    if window < 1:
        raise InvalidArgument("window must be >= 1")
    buf: deque[int] = deque()
    total = 0
    out = []
    for o in outcomes:
        v = int(o.success if isinstance(o, InteractionOutcome) else bool(o))
        buf.append(v)
        total += v
        if len(buf) > window:
            total -= buf.popleft()
        out.append(total / len(buf))
    return out


def category_count(agent: Agent) -> int:
    return len(agent.categories)


def interpretation_similarity(tutor: Agent, learner: Agent) -> float:
    """Mean over the tutor's words of the similarity between both agents' categories.

    Words the learner does not know contribute 0.
    """
    words = tutor.lexicon.words()
    if not words:
        raise InvalidArgument("tutor lexicon is empty")
    total = 0.0
    for w in words:
        if w in learner.lexicon:
            total += category_similarity(learner.category_for(w), tutor.category_for(w))
    return total / len(words)


# -- running -----------------------------------------------------------------

def load_scenes(config: ExperimentConfig) -> list[Scene]:
    if config.corpus is not None:
        return load_corpus(config.corpus)
    return generate_corpus(config.n_scenes, config.seed, config.noise, config.layout)


def run_rng(seed: int, run: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, 1, run]))


def run_single(config: ExperimentConfig, scenes: Sequence[Scene], run: int,
               trace: list[str] | None = None) -> RunResult:
    inventory = config.tutor_inventory()
    tutor = Agent.tutor(inventory)
    learner = Agent.learner(config.learner_kinds(inventory), config.params)
    rng = run_rng(config.seed, run)
    window: deque[int] = deque()
    records, outcomes = [], []
    for i in range(config.interactions):
        scene = scenes[int(rng.integers(len(scenes)))]
        steps = [] if trace is not None else None
        outcome, learner = run_interaction(tutor, learner, scene, rng, config.pointing_failure, steps)
        if trace is not None:
            trace.extend(f"run {run} interaction {i + 1}: {line}" for line in steps)
        outcomes.append(outcome)
        window.append(int(outcome.success))
        if len(window) > config.success_window:
            window.popleft()
        records.append(MetricsRecord(
            run=run,
            interaction=i + 1,
            success=int(outcome.success),
            windowed_success=sum(window) / len(window),
            n_categories=category_count(learner),
            interpretation_similarity=interpretation_similarity(tutor, learner),
            failure_reason=outcome.failure_reason,
            word=outcome.word or "",
            strategy_guessed=outcome.strategy_guessed.value if outcome.strategy_guessed else "",
        ))
    return RunResult(run, records, outcomes, tutor, learner)


def _run_job(args):
    return run_single(*args)


def run_experiment(config: ExperimentConfig, scenes: Sequence[Scene] | None = None, jobs: int = 1,
                   trace: list[str] | None = None) -> ExperimentResult:
    """Run every configured run from a fresh tutor/learner pair.

    Runs are independent and seeded from ``(seed, run)``, so ``jobs > 1`` only
    changes wall-clock time, never results. Tracing forces sequential runs.
    """
    config.validate()
    if scenes is None:
        scenes = load_scenes(config)
    if not scenes:
        raise ConfigError("corpus", "corpus contains no scenes")
    if jobs > 1 and config.runs > 1 and trace is None:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            runs = list(pool.map(_run_job, [(config, scenes, r) for r in range(config.runs)]))
    else:
        runs = [run_single(config, scenes, r, trace) for r in range(config.runs)]
    return ExperimentResult(config, runs)


# -- output ------------------------------------------------------------------

def _fmt(v) -> str:
    return repr(v) if isinstance(v, float) else str(v)


@contextlib.contextmanager
def _opened(target):
    """Yield a text stream for ``target``, which may already be one."""
    if hasattr(target, "write"):
        yield target
    else:
        with open(target, "w", newline="", encoding="utf-8") as fh:
            yield fh


def emit_csv(records: Iterable[MetricsRecord], path) -> None:
    with _opened(path) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in records:
            w.writerow([_fmt(getattr(r, c)) for c in CSV_COLUMNS])


def read_csv(path) -> list[MetricsRecord]:
    records = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != CSV_COLUMNS:
            raise InvalidArgument(f"{path}: unexpected columns {reader.fieldnames}")
        for row in reader:
            records.append(MetricsRecord(
                run=int(row["run"]),
                interaction=int(row["interaction"]),
                success=int(row["success"]),
                windowed_success=float(row["windowed_success"]),
                n_categories=int(row["n_categories"]),
                interpretation_similarity=float(row["interpretation_similarity"]),
                failure_reason=row["failure_reason"],
                word=row["word"],
                strategy_guessed=row["strategy_guessed"],
            ))
    return records


def aggregate(records: Iterable[MetricsRecord]) -> dict[str, np.ndarray]:
    """Cross-run mean and (population) std per interaction for the three measures."""
    by_step: dict[int, list[MetricsRecord]] = {}
    for r in records:
        by_step.setdefault(r.interaction, []).append(r)
    steps = sorted(by_step)
    out = {"interaction": np.array(steps, dtype=int)}
    for name, attr in (("success", "windowed_success"), ("categories", "n_categories"),
                       ("similarity", "interpretation_similarity")):
        values = [np.array([getattr(r, attr) for r in by_step[s]], dtype=float) for s in steps]
        out[f"{name}_mean"] = np.array([v.mean() for v in values])
        out[f"{name}_std"] = np.array([v.std() for v in values])
    return out


def emit_plot_data(records: Iterable[MetricsRecord], path) -> None:
    agg = aggregate(records)
    with _opened(path) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(PLOT_COLUMNS)
        for i in range(len(agg["interaction"])):
            w.writerow([int(agg["interaction"][i])] + [repr(float(agg[c][i])) for c in PLOT_COLUMNS[1:]])


SNAPSHOT_COLUMNS = ("run", "word", "category", "strategy", "prototype", "sigma", "n_samples")


def emit_snapshots(rows: Iterable[dict], path) -> None:
    with _opened(path) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SNAPSHOT_COLUMNS)
        for row in rows:
            w.writerow([_fmt(row[c]) for c in SNAPSHOT_COLUMNS])
