import math

import numpy as np
import pytest

from spatial_lexicon.errors import CorpusParseError, GenerationFailed, UnsupportedVersion
from spatial_lexicon.geometry import BLOCK, angular_distance, egocentric_features, polar
from spatial_lexicon.scenes import (
    LayoutConfig,
    NoiseModel,
    bearing_errors,
    generate_corpus,
    generate_scene,
    load_corpus,
    save_corpus,
)

ZERO = NoiseModel(0.0, 0.0, 0.0, 0.0)


def test_zero_noise_world_models_are_rigid_transforms():
    for sid in range(20):
        scene = generate_scene(sid, seed=5, noise=ZERO, layout=LayoutConfig(min_blocks=2, max_blocks=6))
        truth = scene.truth
        for wm, pose, other in ((scene.tutor_wm, truth.tutor_pose, truth.learner_pose),
                                (scene.learner_wm, truth.learner_pose, truth.tutor_pose)):
            for i, block in enumerate(wm.blocks):
                t = truth.objects[i]
                assert (block.x, block.y) == pytest.approx(pose.to_local(t.x, t.y), abs=1e-9)
            est = wm.other_robot_pose
            assert (est.x, est.y) == pytest.approx(pose.to_local(other.x, other.y), abs=1e-9)
            assert angular_distance(est.heading, other.heading - pose.heading) < 1e-12
            assert angular_distance(wm.wall_bearing, truth.wall_direction - pose.heading) < 1e-12


def test_same_seed_same_scene():
    assert generate_scene(3, seed=9) == generate_scene(3, seed=9)
    assert generate_scene(3, seed=9) != generate_scene(3, seed=10)


def test_scene_does_not_depend_on_generation_order():
    corpus = generate_corpus(10, seed=4)
    assert corpus[7] == generate_scene(7, seed=4)


def test_mean_bearing_error_matches_half_normal():
    # 2 agents x 2 blocks x 2500 scenes = 10 000 perceived objects
    corpus = generate_corpus(2500, seed=1, noise=NoiseModel(angle=0.05))
    errors = np.abs(bearing_errors(corpus))
    assert len(errors) == 10_000
    assert 0.036 <= errors.mean() <= 0.044


def test_layout_invariants(small_corpus):
    layout = LayoutConfig(min_blocks=2, max_blocks=6)
    corpus = generate_corpus(200, seed=2, layout=layout)
    for scene in corpus + small_corpus:
        blocks = [o for o in scene.truth.objects if o.kind == BLOCK]
        assert 2 <= len(blocks) <= 6
        for i, a in enumerate(blocks):
            for b in blocks[i + 1:]:
                assert math.hypot(a.x - b.x, a.y - b.y) >= 0.3
        assert scene.truth.tutor_pose != scene.truth.learner_pose
        assert len(scene.tutor_wm.blocks) == len(scene.learner_wm.blocks) == len(blocks)
        assert {t for t, _ in scene.correspondence} == set(scene.tutor_wm.block_ids())
        assert {l for _, l in scene.correspondence} == set(scene.learner_wm.block_ids())


def test_cross_agent_discrepancy_tracks_noise():
    """Bearing discrepancies between the two agents grow with the configured noise."""
    def spread(noise):
        diffs = []
        for scene in generate_corpus(300, seed=8, noise=noise):
            tutor_ref = scene.tutor_wm.other_robot_pose
            for t_id, l_id in scene.correspondence:
                o = scene.tutor_wm.get(t_id)
                a_t, _ = polar(*tutor_ref.to_local(o.x, o.y))
                a_l, _ = egocentric_features(scene.learner_wm, l_id)
                diffs.append(angular_distance(a_t, a_l))
        return float(np.median(diffs))

    assert spread(ZERO) < 1e-9
    low, high = spread(NoiseModel(0.02, 0.02, 0.02, 0.02)), spread(NoiseModel(0.1, 0.1, 0.1, 0.1))
    assert 0 < low < high


def test_impossible_layout_fails():
    with pytest.raises(GenerationFailed):
        generate_scene(0, layout=LayoutConfig(area_size=0.5, min_blocks=6, max_blocks=6, max_retries=5))


def test_empty_corpus_round_trip(tmp_path):
    path = tmp_path / "empty.jsonl"
    save_corpus([], path)
    assert len(path.read_text().splitlines()) == 1
    assert load_corpus(path) == []


def test_full_corpus_round_trip(tmp_path):
    corpus = generate_corpus(800, seed=0)
    path = tmp_path / "corpus.jsonl"
    save_corpus(corpus, path)
    assert load_corpus(path) == corpus


def test_truncated_file_names_line(tmp_path):
    path = tmp_path / "c.jsonl"
    save_corpus(generate_corpus(3, seed=0), path)
    text = path.read_text()
    path.write_text(text[: len(text) - 40])
    with pytest.raises(CorpusParseError) as info:
        load_corpus(path)
    assert info.value.line == 4
    assert "line 4" in str(info.value)


def test_version_mismatch(tmp_path):
    path = tmp_path / "c.jsonl"
    path.write_text('{"format": "spatial-lexicon-corpus", "version": 99}\n')
    with pytest.raises(UnsupportedVersion):
        load_corpus(path)


def test_garbage_header(tmp_path):
    path = tmp_path / "c.jsonl"
    path.write_text("hello\n")
    with pytest.raises(CorpusParseError) as info:
        load_corpus(path)
    assert info.value.line == 1
