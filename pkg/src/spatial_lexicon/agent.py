"""Tutor and learner agents.

A tutor holds a fixed word/category inventory. A learner starts empty, adopts
categories for unknown words when the speaker points at the topic, and aligns
them with every successful use.
"""

from __future__ import annotations

import copy
import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

from .categories import (
    DEFAULT_INITIAL_SIGMA,
    FeatureValue,
    SpatialCategory,
    StrategyKind,
    construe_all,
    discrimination_score,
    invent_category,
    similarity,
)
from .errors import (
    AdoptionDeferred,
    AmbiguousReference,
    InvalidArgument,
    NoDiscriminatingCategory,
    StrategyMismatch,
    UnknownCategory,
    UnknownWord,
)
from .geometry import ORIGIN, Pose, WorldModel, signed_angle_diff

TUTOR_ROLE = "tutor"
LEARNER_ROLE = "learner"

TIE_POLICIES = ("fixed-priority", "random", "reject")
STRATEGY_PRIORITY = (StrategyKind.PROJECTIVE, StrategyKind.ABSOLUTE, StrategyKind.PROXIMAL)


@dataclass(frozen=True)
class LearningParams:
    alpha_sigma: float = 0.1
    sample_window: int = 30
    initial_sigma: float = DEFAULT_INITIAL_SIGMA
    tie_policy: str = "fixed-priority"
    unique_margin: float = 0.0
    # candidate scores closer than this count as a tie between strategies
    tie_tolerance: float = 1e-9
    # use sigma + alpha * (sigma - sd) literally instead of moving toward sd
    verbatim_sigma_update: bool = False

    def __post_init__(self):
        if not self.alpha_sigma > 0:
            raise InvalidArgument("alpha_sigma must be > 0")
        if self.sample_window < 1:
            raise InvalidArgument("sample_window must be >= 1")
        if not self.initial_sigma > 0:
            raise InvalidArgument("initial_sigma must be > 0")
        if self.tie_policy not in TIE_POLICIES:
            raise InvalidArgument(f"tie_policy must be one of {', '.join(TIE_POLICIES)}")
        if self.unique_margin < 0:
            raise InvalidArgument("unique_margin must be >= 0")


class Lexicon:
    """Bijective word <-> category id mapping."""

    def __init__(self, entries: Iterable[tuple[str, str]] = ()):
        self._by_word: dict[str, str] = {}
        self._by_category: dict[str, str] = {}
        for word, cat_id in entries:
            self.bind(word, cat_id)

    def bind(self, word: str, category_id: str) -> None:
        if word in self._by_word:
            raise InvalidArgument(f"word {word!r} is already bound")
        if category_id in self._by_category:
            raise InvalidArgument(f"category {category_id!r} is already bound")
        self._by_word[word] = category_id
        self._by_category[category_id] = word

    def category_of(self, word: str) -> str:
        try:
            return self._by_word[word]
        except KeyError:
            raise UnknownWord(word) from None

    def word_of(self, category_id: str) -> str:
        return self._by_category[category_id]

    def __contains__(self, word) -> bool:
        return word in self._by_word

    def __len__(self) -> int:
        return len(self._by_word)

    def items(self):
        return self._by_word.items()

    def words(self) -> list[str]:
        return list(self._by_word)

    def __eq__(self, other):
        return isinstance(other, Lexicon) and self._by_word == other._by_word

    def __repr__(self):
        return f"Lexicon({self._by_word!r})"


@dataclass(frozen=True)
class ConceptualizationResult:
    word: str
    category_id: str
    score: float


def circular_mean(values: Sequence[float]) -> float:
    n = len(values)
    s = sum(math.sin(v) for v in values) / n
    c = sum(math.cos(v) for v in values) / n
    return math.atan2(s, c)


def sample_sd(values: Sequence[float], centre: float, angular: bool) -> float:
    """Standard deviation around ``centre`` with the n - 1 denominator."""
    if angular:
        devs = [signed_angle_diff(v, centre) for v in values]
    else:
        devs = [v - centre for v in values]
    return math.sqrt(sum(d * d for d in devs) / (len(values) - 1))


def aligned(category: SpatialCategory, sample: FeatureValue, params: LearningParams) -> SpatialCategory:
    """Return ``category`` updated with one more sample.

    The prototype becomes the (circular) mean of the sample window. With two
    or more samples sigma moves a fraction ``alpha_sigma`` of the way toward
    the window's standard deviation.
    """
    if sample.strategy is not category.strategy:
        raise StrategyMismatch(f"{sample.strategy} sample for {category.strategy} category {category.id}")
    samples = (category.samples + (sample.value,))[-params.sample_window:]
    angular = category.strategy.angular
    prototype = circular_mean(samples) if angular else sum(samples) / len(samples)
    sigma = category.sigma
    if len(samples) >= 2:
        sd = sample_sd(samples, prototype, angular)
        if params.verbatim_sigma_update:
            sigma = max(sigma + params.alpha_sigma * (sigma - sd), 1e-6)
        else:
            sigma = sigma + params.alpha_sigma * (sd - sigma)
        # sd == 0 with alpha >= 1 would collapse sigma
        sigma = max(sigma, 1e-9)
    return replace(category, prototype=prototype, sigma=sigma, samples=samples)


@dataclass
class Agent:
    id: str
    role: str
    strategies: tuple[StrategyKind, ...] = ()
    params: LearningParams = field(default_factory=LearningParams)
    lexicon: Lexicon = field(default_factory=Lexicon)
    categories: dict[str, SpatialCategory] = field(default_factory=dict)
    _counter: int = field(default=0, repr=False)

    @classmethod
    def tutor(cls, inventory: Iterable[tuple[str, SpatialCategory]], agent_id: str = "tutor") -> Agent:
        agent = cls(agent_id, TUTOR_ROLE)
        strategies = []
        for word, cat in inventory:
            agent.categories[cat.id] = cat
            agent.lexicon.bind(word, cat.id)
            if cat.strategy not in strategies:
                strategies.append(cat.strategy)
        agent.strategies = tuple(strategies)
        return agent

    @classmethod
    def learner(cls, strategies: Iterable[StrategyKind], params: LearningParams | None = None,
                agent_id: str = "learner") -> Agent:
        strategies = tuple(strategies)
        if not strategies:
            raise InvalidArgument("a learner needs at least one strategy")
        return cls(agent_id, LEARNER_ROLE, strategies, params or LearningParams())

    @property
    def is_learner(self) -> bool:
        return self.role == LEARNER_ROLE

    def category_for(self, word: str) -> SpatialCategory:
        return self.categories[self.lexicon.category_of(word)]

    def state(self):
        """Comparable copy of everything that can change during a game."""
        return copy.deepcopy((dict(self.lexicon.items()), self.categories))

    # -- speaking / hearing -------------------------------------------------

    def conceptualize(self, wm: WorldModel, topic_id: str, reference: Pose = ORIGIN) -> ConceptualizationResult:
        """Pick the word whose category best discriminates the topic."""
        ids = wm.block_ids()
        if topic_id not in ids:
            wm.get(topic_id)
            raise InvalidArgument(f"topic {topic_id!r} is not a block")
        t = ids.index(topic_id)
        features: dict[StrategyKind, list[FeatureValue]] = {}
        best = None
        for word, cat_id in self.lexicon.items():
            cat = self.categories[cat_id]
            fs = features.get(cat.strategy)
            if fs is None:
                fs = features[cat.strategy] = construe_all(wm, ids, cat.strategy, reference)
            score = discrimination_score(cat, fs[t], fs[:t] + fs[t + 1:])
            if best is None or score > best.score:
                best = ConceptualizationResult(word, cat_id, score)
        if best is None or best.score <= 0:
            raise NoDiscriminatingCategory(topic_id)
        return best

    def interpret(self, wm: WorldModel, word: str, reference: Pose = ORIGIN) -> str:
        """Return the block the category named ``word`` applies to best."""
        cat = self.category_for(word)
        ids = wm.block_ids()
        sims = [similarity(f, cat) for f in construe_all(wm, ids, cat.strategy, reference)]
        order = sorted(range(len(ids)), key=lambda i: -sims[i])
        if len(order) > 1 and sims[order[0]] - sims[order[1]] <= self.params.unique_margin:
            raise AmbiguousReference(word)
        return ids[order[0]]

    # -- learning ------------------------------------------------------------

    def candidate_scores(self, topic_id: str, wm: WorldModel, reference: Pose = ORIGIN) -> list[tuple[SpatialCategory, float]]:
        """One invented candidate per enabled strategy, with its discrimination score."""
        ids = wm.block_ids()
        t = ids.index(topic_id)
        out = []
        for kind in self.strategies:
            fs = construe_all(wm, ids, kind, reference)
            cand = invent_category(kind, fs[t], f"{kind.value}-{self._counter + 1}", self.params.initial_sigma)
            out.append((cand, discrimination_score(cand, fs[t], fs[:t] + fs[t + 1:])))
        return out

    def adopt(self, word: str, topic_id: str, wm: WorldModel, reference: Pose = ORIGIN, rng=None) -> SpatialCategory:
        """Create and bind a category for an unknown word after pointing."""
        if not self.is_learner:
            raise InvalidArgument(f"{self.id} is a tutor and does not adopt words")
        if word in self.lexicon:
            raise InvalidArgument(f"word {word!r} is already known")
        scored = self.candidate_scores(topic_id, wm, reference)
        top = max(score for _, score in scored)
        tied = [cand for cand, score in scored if top - score <= self.params.tie_tolerance]
        if len(tied) == 1:
            chosen = tied[0]
        elif self.params.tie_policy == "reject":
            raise AdoptionDeferred(word)
        elif self.params.tie_policy == "random":
            if rng is None:
                raise InvalidArgument("tie policy 'random' needs an rng")
            chosen = tied[int(rng.integers(len(tied)))]
        else:
            chosen = min(tied, key=lambda c: STRATEGY_PRIORITY.index(c.strategy))
        self._counter += 1
        self.categories[chosen.id] = chosen
        self.lexicon.bind(word, chosen.id)
        return chosen

    def align(self, category_id: str, sample: FeatureValue) -> SpatialCategory:
        try:
            cat = self.categories[category_id]
        except KeyError:
            raise UnknownCategory(category_id) from None
        updated = aligned(cat, sample, self.params)
        self.categories[category_id] = updated
        return updated

    def record_success(self, category_id: str, feature: FeatureValue) -> None:
        if self.is_learner:
            self.align(category_id, feature)

    def snapshot(self) -> list[dict]:
        """Per-category dump: word, strategy, prototype, sigma and sample count."""
        rows = []
        for word, cat_id in self.lexicon.items():
            cat = self.categories[cat_id]
            rows.append({
                "word": word,
                "category": cat_id,
                "strategy": cat.strategy.value,
                "prototype": cat.prototype,
                "sigma": cat.sigma,
                "n_samples": len(cat.samples),
            })
        return rows
