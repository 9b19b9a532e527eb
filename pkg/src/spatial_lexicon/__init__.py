"""Grounded acquisition of spatial lexicons through tutor/learner language games."""

__version__ = "0.1.0"

from .agent import Agent, LearningParams, Lexicon
from .categories import FeatureValue, SpatialCategory, StrategyKind
from .experiment import ExperimentConfig, run_experiment
from .game import InteractionOutcome, run_interaction
from .geometry import Pose, WorldModel
from .scenes import LayoutConfig, NoiseModel, Scene, generate_corpus, generate_scene, load_corpus, save_corpus

__all__ = [
    "Agent", "LearningParams", "Lexicon",
    "FeatureValue", "SpatialCategory", "StrategyKind",
    "ExperimentConfig", "run_experiment",
    "InteractionOutcome", "run_interaction",
    "Pose", "WorldModel",
    "LayoutConfig", "NoiseModel", "Scene", "generate_corpus", "generate_scene", "load_corpus", "save_corpus",
]
