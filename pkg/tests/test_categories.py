import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from spatial_lexicon.categories import (
    FeatureValue,
    SpatialCategory,
    StrategyKind,
    category_similarity,
    construe,
    default_inventory,
    discrimination_score,
    format_inventory,
    invent_category,
    parse_inventory,
    similarity,
)
from spatial_lexicon.errors import InvalidArgument, StrategyMismatch
from spatial_lexicon.geometry import Pose, angular_distance

from conftest import make_wm

P, A, X = StrategyKind.PROJECTIVE, StrategyKind.ABSOLUTE, StrategyKind.PROXIMAL


def test_construe_projective_straight_ahead():
    wm = make_wm({"o": (3.0, 1.0)})
    # reference pose at (1, 1) facing +x: the object is dead ahead
    assert construe(wm, "o", P, Pose(1.0, 1.0, 0.0)).value == pytest.approx(0.0, abs=1e-12)


def test_construe_absolute_aligned_with_wall():
    wm = make_wm({"o": (math.pi / 4, 2.0)}, polar=True, wall=math.pi / 4)
    assert construe(wm, "o", A).value == pytest.approx(0.0, abs=1e-12)


def test_construe_absolute_ignores_reference_heading():
    wm = make_wm({"o": (1.0, 2.0)}, wall=0.3)
    a = construe(wm, "o", A, Pose(0.5, -0.5, 0.0)).value
    b = construe(wm, "o", A, Pose(0.5, -0.5, 1.1)).value
    assert angular_distance(a, b) < 1e-12


def test_construe_proximal_345():
    wm = make_wm({"o": (4.0, 5.0)})
    assert construe(wm, "o", X, Pose(1.0, 1.0, 0.7)).value == pytest.approx(5.0)


def test_similarity_examples():
    cat = SpatialCategory("c", P, 0.5, 0.1)
    assert similarity(FeatureValue(P, 0.5), cat) == 1.0
    assert similarity(FeatureValue(P, 0.6), cat) == pytest.approx(math.exp(-0.5), abs=1e-12)
    wide = SpatialCategory("w", X, 1.0, 0.4)
    assert similarity(FeatureValue(X, 1.4), wide) == pytest.approx(0.6065306597, abs=1e-9)


def test_similarity_strategy_mismatch():
    with pytest.raises(StrategyMismatch):
        similarity(FeatureValue(X, 1.0), SpatialCategory("c", P, 0.0, 0.4))


@given(st.floats(0.001, 3.0), st.floats(0.001, 3.0), st.floats(0.01, 2.0))
def test_similarity_monotone(d1, d2, sigma):
    cat = SpatialCategory("c", X, 0.0, sigma)
    s1, s2 = similarity(FeatureValue(X, d1), cat), similarity(FeatureValue(X, d2), cat)
    if d1 < d2:
        assert s1 > s2 or s2 == 0.0
    wider = SpatialCategory("c", X, 0.0, sigma * 1.5)
    assert similarity(FeatureValue(X, d1), wider) > s1


def test_invent_category():
    c = invent_category(P, FeatureValue(P, 1.3))
    assert (c.prototype, c.sigma, c.samples) == (1.3, 0.1, (1.3,))
    d = invent_category(X, FeatureValue(X, 0.8))
    assert (d.prototype, d.sigma) == (0.8, 0.1)
    assert similarity(FeatureValue(X, 0.8), d) == 1.0
    with pytest.raises(StrategyMismatch):
        invent_category(P, FeatureValue(X, 0.8))


@given(st.sampled_from(list(StrategyKind)), st.floats(0.0, 3.0))
def test_invented_category_matches_its_topic(kind, v):
    c = invent_category(kind, FeatureValue(kind, v))
    assert similarity(FeatureValue(kind, v), c) == 1.0


def test_discrimination_arithmetic():
    # prototype 0, sigma 0.5: topic at d1 with sim 0.9, distractor with sim 0.4
    cat = SpatialCategory("c", X, 0.0, 0.5)
    d_topic, d_other = -math.log(0.9), -math.log(0.4)
    score = discrimination_score(cat, FeatureValue(X, d_topic), [FeatureValue(X, d_other)])
    assert score == pytest.approx(0.5, abs=1e-12)


def test_discrimination_indistinguishable_objects():
    cat = SpatialCategory("c", P, 0.3, 0.1)
    assert discrimination_score(cat, FeatureValue(P, 0.3), [FeatureValue(P, 0.3)]) == 0.0


def test_discrimination_empty_context():
    cat = SpatialCategory("c", P, 0.3, 0.1)
    assert discrimination_score(cat, FeatureValue(P, 0.5), []) == similarity(FeatureValue(P, 0.5), cat)


def brute_force_disc(prototype, sigma, topic, others):
    sims = [math.exp(-angular_distance(v, prototype) / (2 * sigma)) for v in [topic] + others]
    return sims[0] - max(sims[1:], default=0.0)


def test_discrimination_matches_brute_force():
    rng = np.random.default_rng(0)
    for _ in range(500):
        vals = list(rng.uniform(-math.pi, math.pi, size=int(rng.integers(1, 7))))
        cat = invent_category(P, FeatureValue(P, vals[0]))
        got = discrimination_score(cat, FeatureValue(P, vals[0]), [FeatureValue(P, v) for v in vals[1:]])
        assert got == brute_force_disc(cat.prototype, cat.sigma, vals[0], vals[1:])


@given(st.floats(-3.1, 3.1), st.lists(st.floats(-3.1, 3.1), max_size=5), st.floats(-3.1, 3.1), st.floats(0.05, 1.0))
def test_discrimination_bounds(topic, others, proto, sigma):
    cat = SpatialCategory("c", P, proto, sigma)
    t = FeatureValue(P, topic)
    score = discrimination_score(cat, t, [FeatureValue(P, o) for o in others])
    assert -1.0 <= score <= similarity(t, cat) <= 1.0


def test_projective_absolute_tie_on_random_scenes():
    rng = np.random.default_rng(1)
    for _ in range(300):
        pts = {f"o{i}": tuple(rng.uniform(-3, 3, size=2)) for i in range(int(rng.integers(2, 7)))}
        wm = make_wm(pts, wall=rng.uniform(-math.pi, math.pi))
        ref = Pose(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-math.pi, math.pi))
        ids = list(pts)
        scores = []
        for kind in (P, A):
            feats = [construe(wm, i, kind, ref) for i in ids]
            cand = invent_category(kind, feats[0])
            scores.append(discrimination_score(cand, feats[0], feats[1:]))
        assert abs(scores[0] - scores[1]) <= 1e-12


def test_category_similarity_examples():
    tutor = SpatialCategory("t", P, math.pi / 2, 0.4)
    assert category_similarity(tutor, tutor) == 1.0
    learner = SpatialCategory("l", P, math.pi / 2 - 0.5, 0.4)
    assert category_similarity(learner, tutor) == pytest.approx(0.7316156, abs=1e-6)
    # "back" prototypes on either side of the wrap compare as close
    b1, b2 = SpatialCategory("a", P, 3.1, 0.4), SpatialCategory("b", P, -3.1, 0.4)
    assert category_similarity(b1, b2) > 0.99
    assert category_similarity(b1, SpatialCategory("x", X, 3.1, 0.4)) == 0.0


@given(st.floats(-3.1, 3.1), st.floats(-3.1, 3.1), st.floats(0.05, 1.0), st.floats(0.05, 1.0))
def test_category_similarity_symmetric(a, b, s1, s2):
    c1, c2 = SpatialCategory("a", P, a, s1), SpatialCategory("b", P, b, s2)
    assert category_similarity(c1, c2) == pytest.approx(category_similarity(c2, c1), abs=1e-15)


def test_default_inventories():
    proj = dict(default_inventory(["projective"]))
    assert proj["left"].prototype == pytest.approx(math.pi / 2)
    assert proj["back"].prototype == pytest.approx(math.pi)
    assert all(c.sigma == 0.4 for c in proj.values())
    assert len(default_inventory(["projective", "proximal"])) == 6


def test_inventory_file_round_trip():
    entries = default_inventory(["projective", "absolute", "proximal"])
    parsed = parse_inventory(format_inventory(entries))
    assert parsed == entries


def test_inventory_parsing():
    got = parse_inventory("# target system\nleft projective 90deg 0.4\nnear proximal 0.5 0.3  # close\n")
    assert got[0][1].prototype == pytest.approx(math.pi / 2)
    assert got[1][0] == "near" and got[1][1].strategy is X
    with pytest.raises(InvalidArgument, match=":1:"):
        parse_inventory("left sideways 1.0 0.4")
    with pytest.raises(InvalidArgument, match="duplicate"):
        parse_inventory("a projective 0 0.4\na projective 1 0.4")
