import math

import pytest

from spatial_lexicon.geometry import BLOCK, ROBOT, PerceivedObject, Pose, WorldModel
from spatial_lexicon.scenes import GroundTruthScene, Scene


def make_wm(blocks, owner="learner", other=Pose(1.0, 0.0, math.pi), wall=0.0, polar=False):
    """World model with blocks given as {id: (x, y)} or {id: (angle, distance)} when ``polar``."""
    objects = []
    for obj_id, (a, b) in blocks.items():
        x, y = (b * math.cos(a), b * math.sin(a)) if polar else (a, b)
        objects.append(PerceivedObject(obj_id, BLOCK, x, y))
    objects.append(PerceivedObject("robot-other", ROBOT, other.x, other.y))
    return WorldModel(owner, tuple(objects), other, wall)


def make_scene(tutor_wm, learner_wm, pairs, scene_id=0):
    truth = GroundTruthScene((), Pose(0.0, 0.0, 0.0), Pose(1.0, 0.0, math.pi), 0.0)
    return Scene(scene_id, truth, tutor_wm, learner_wm, tuple(pairs))


@pytest.fixture(scope="session")
def small_corpus():
    from spatial_lexicon.scenes import generate_corpus
    return generate_corpus(200, seed=11)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
