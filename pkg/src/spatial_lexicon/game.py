"""One language game between a tutor and a learner over a single scene."""

from __future__ import annotations

from dataclasses import dataclass

from .agent import Agent
from .categories import StrategyKind, construe
from .errors import AdoptionDeferred, AmbiguousReference, NoDiscriminatingCategory, UnknownWord
from .geometry import ORIGIN, Pose
from .scenes import LEARNER, TUTOR, Scene

NONE = "none"
NO_DISCRIMINATING_CATEGORY = "no-discriminating-category"
UNKNOWN_WORD = "unknown-word"
AMBIGUOUS_REFERENCE = "ambiguous-reference"
WRONG_REFERENT = "wrong-referent"
ADOPTION_DEFERRED = "adoption-deferred"
FAILURE_REASONS = (NONE, NO_DISCRIMINATING_CATEGORY, UNKNOWN_WORD, AMBIGUOUS_REFERENCE, WRONG_REFERENT, ADOPTION_DEFERRED)


@dataclass(frozen=True)
class InteractionOutcome:
    scene_id: int
    speaker: str
    hearer: str
    success: bool
    failure_reason: str = NONE
    word: str | None = None
    topic: str | None = None
    interpreted: str | None = None
    strategy_guessed: StrategyKind | None = None
    adopted: bool = False

    def __post_init__(self):
        if self.success != (self.failure_reason == NONE):
            raise ValueError("success must coincide with failure_reason 'none'")


def reference_pose(scene: Scene, side: str) -> Pose:
    """The learner's pose in ``side``'s world model.

    All features in a game are construed from the learner's perspective; the
    tutor relies on its own estimate of where the learner stands.
    """
    return ORIGIN if side == LEARNER else scene.tutor_wm.other_robot_pose


def resolve_pointing(scene: Scene, side: str, obj_id: str) -> str:
    return scene.resolve_pointing(side, obj_id)


def _other(side: str) -> str:
    return LEARNER if side == TUTOR else TUTOR


def run_interaction(tutor: Agent, learner: Agent, scene: Scene, rng, pointing_failure: float = 0.0,
                    trace: list[str] | None = None) -> tuple[InteractionOutcome, Agent]:
    """Play one game and return its outcome together with the (updated) learner.

    ``tutor`` perceives through ``scene.tutor_wm`` and ``learner`` through
    ``scene.learner_wm``. Protocol failures never raise; they are reported in
    the outcome.
    """
    agents = {TUTOR: tutor, LEARNER: learner}
    log = trace.append if trace is not None else (lambda _msg: None)

    speaker_side = TUTOR if rng.random() < 0.5 else LEARNER
    hearer_side = _other(speaker_side)
    speaker, hearer = agents[speaker_side], agents[hearer_side]
    speaker_wm, hearer_wm = scene.world_model(speaker_side), scene.world_model(hearer_side)
    speaker_ref, hearer_ref = reference_pose(scene, speaker_side), reference_pose(scene, hearer_side)
    log(f"scene {scene.id}: {speaker.id} speaks, {hearer.id} hears")

    def outcome(reason, **kw):
        return InteractionOutcome(scene.id, speaker.id, hearer.id, reason == NONE, reason, **kw), learner

    blocks = speaker_wm.block_ids()
    topic = blocks[int(rng.integers(len(blocks)))]
    log(f"{speaker.id} picks topic {topic}")

    try:
        concept = speaker.conceptualize(speaker_wm, topic, speaker_ref)
    except NoDiscriminatingCategory:
        log(f"{speaker.id} finds no discriminating category")
        return outcome(NO_DISCRIMINATING_CATEGORY, topic=topic)
    word = concept.word
    log(f"{speaker.id} says {word!r} (category {concept.category_id}, score {concept.score:.3f})")

    topic_for_hearer = resolve_pointing(scene, speaker_side, topic)
    try:
        interpreted = hearer.interpret(hearer_wm, word, hearer_ref)
    except UnknownWord:
        log(f"{hearer.id} does not know {word!r}; {speaker.id} points to {topic_for_hearer}")
        if not hearer.is_learner:
            return outcome(UNKNOWN_WORD, word=word, topic=topic)
        try:
            cat = hearer.adopt(word, topic_for_hearer, hearer_wm, hearer_ref, rng)
        except AdoptionDeferred:
            log(f"{hearer.id} cannot decide on a strategy for {word!r}; adoption deferred")
            return outcome(ADOPTION_DEFERRED, word=word, topic=topic)
        log(f"{hearer.id} adopts {word!r} as {cat.id} (prototype {cat.prototype:.3f}, sigma {cat.sigma})")
        return outcome(UNKNOWN_WORD, word=word, topic=topic, strategy_guessed=cat.strategy, adopted=True)
    except AmbiguousReference:
        log(f"{hearer.id} finds no unique referent for {word!r}; {speaker.id} points to {topic_for_hearer}")
        return outcome(AMBIGUOUS_REFERENCE, word=word, topic=topic)

    if pointing_failure > 0 and rng.random() < pointing_failure:
        others = [b for b in hearer_wm.block_ids() if b != interpreted]
        if others:
            interpreted = others[int(rng.integers(len(others)))]
    log(f"{hearer.id} points to {interpreted}")

    if resolve_pointing(scene, hearer_side, interpreted) != topic:
        log(f"wrong object; {speaker.id} points to {topic_for_hearer}")
        return outcome(WRONG_REFERENT, word=word, topic=topic, interpreted=interpreted)

    log("success")
    learner_topic = topic if speaker_side == LEARNER else interpreted
    cat_id = learner.lexicon.category_of(word)
    strategy = learner.categories[cat_id].strategy
    learner.record_success(cat_id, construe(scene.learner_wm, learner_topic, strategy, ORIGIN))
    return outcome(NONE, word=word, topic=topic, interpreted=interpreted)
