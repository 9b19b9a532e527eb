"""Synthetic scene corpora standing in for recorded robot data.

Every scene has one ground-truth layout and two world models derived from it,
one per agent, each perturbed with independent perceptual noise. The world
models share nothing but the block correspondence used to resolve pointing.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import CorpusParseError, GenerationFailed, InvalidArgument, ProtocolError, UnsupportedVersion
from .geometry import BLOCK, ROBOT, PerceivedObject, Pose, WorldModel, normalize_angle, polar

CORPUS_FORMAT = "spatial-lexicon-corpus"
CORPUS_VERSION = 1

TUTOR = "tutor"
LEARNER = "learner"


@dataclass(frozen=True)
class NoiseModel:
    angle: float = 0.05
    dist_rel: float = 0.05
    pose_angle: float = 0.05
    pose_dist_rel: float = 0.05

    def __post_init__(self):
        for name in ("angle", "dist_rel", "pose_angle", "pose_dist_rel"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v >= 0):
                raise InvalidArgument(f"noise parameter {name} must be >= 0, got {v!r}")


@dataclass(frozen=True)
class LayoutConfig:
    """Geometry of generated scenes.

    Blocks and both robots are placed uniformly inside a square area centred
    on the global origin; robot headings are uniform on the circle.
    """

    area_size: float = 3.0
    min_blocks: int = 2
    max_blocks: int = 2
    min_block_gap: float = 0.3
    robot_clearance: float = 0.3
    min_robot_gap: float = 1.0
    max_robot_gap: float = 2.0
    wall_direction: float = 0.0
    max_retries: int = 200

    def __post_init__(self):
        if not 1 <= self.min_blocks <= self.max_blocks:
            raise InvalidArgument("need 1 <= min_blocks <= max_blocks")
        if self.area_size <= 0 or self.min_robot_gap <= 0 or self.max_robot_gap < self.min_robot_gap:
            raise InvalidArgument("invalid area or robot gap bounds")


@dataclass(frozen=True)
class GroundTruthScene:
    objects: tuple[PerceivedObject, ...]
    tutor_pose: Pose
    learner_pose: Pose
    wall_direction: float


@dataclass(frozen=True)
class Scene:
    id: int
    truth: GroundTruthScene
    tutor_wm: WorldModel
    learner_wm: WorldModel
    correspondence: tuple[tuple[str, str], ...]  # (tutor id, learner id) per block
    _maps: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        pairs = tuple(tuple(p) for p in self.correspondence)
        object.__setattr__(self, "correspondence", pairs)
        forward = {t: l for t, l in pairs}
        backward = {l: t for t, l in pairs}
        if len(forward) != len(pairs) or len(backward) != len(pairs):
            raise InvalidArgument(f"scene {self.id}: correspondence is not a bijection")
        object.__setattr__(self, "_maps", {TUTOR: forward, LEARNER: backward})

    def world_model(self, side: str) -> WorldModel:
        return self.tutor_wm if side == TUTOR else self.learner_wm

    def resolve_pointing(self, side: str, obj_id: str) -> str:
        """Map an object id pointed at by ``side`` into the other side's world model."""
        try:
            return self._maps[side][obj_id]
        except KeyError:
            raise ProtocolError(f"scene {self.id}: {side} object {obj_id!r} has no correspondence") from None


def _perceive(observer: Pose, x: float, y: float, rng, sigma_angle: float, sigma_rel: float) -> tuple[float, float]:
    lx, ly = observer.to_local(x, y)
    bearing, rng_dist = polar(lx, ly)
    bearing += rng.normal(0.0, sigma_angle) if sigma_angle > 0 else 0.0
    if sigma_rel > 0:
        rng_dist = max(0.0, rng_dist * (1.0 + rng.normal(0.0, sigma_rel)))
    return rng_dist * math.cos(bearing), rng_dist * math.sin(bearing)


def _world_model(owner: str, observer: Pose, other_name: str, other: Pose, blocks, ids, wall_direction, noise, rng) -> WorldModel:
    objects = []
    for (x, y), obj_id in zip(blocks, ids):
        px, py = _perceive(observer, x, y, rng, noise.angle, noise.dist_rel)
        objects.append(PerceivedObject(obj_id, BLOCK, px, py))
    ox, oy = _perceive(observer, other.x, other.y, rng, noise.pose_angle, noise.pose_dist_rel)
    heading = other.heading - observer.heading
    if noise.pose_angle > 0:
        heading += rng.normal(0.0, noise.pose_angle)
    other_pose = Pose(ox, oy, heading)
    objects.append(PerceivedObject(f"robot-{other_name}", ROBOT, ox, oy))
    wall = wall_direction - observer.heading
    if noise.angle > 0:
        wall += rng.normal(0.0, noise.angle)
    return WorldModel(owner, tuple(objects), other_pose, wall)


def _in_area(x: float, y: float, half: float) -> bool:
    return -half <= x <= half and -half <= y <= half


def _layout(layout: LayoutConfig, rng):
    half = layout.area_size / 2.0
    for _ in range(layout.max_retries):
        tx, ty = rng.uniform(-half, half, size=2)
        gap = rng.uniform(layout.min_robot_gap, layout.max_robot_gap)
        phi = rng.uniform(-math.pi, math.pi)
        lx, ly = tx + gap * math.cos(phi), ty + gap * math.sin(phi)
        if _in_area(lx, ly, half):
            break
    else:
        raise GenerationFailed("could not place both robots inside the area")
    tutor = Pose(float(tx), float(ty), float(rng.uniform(-math.pi, math.pi)))
    learner = Pose(float(lx), float(ly), float(rng.uniform(-math.pi, math.pi)))

    n = int(rng.integers(layout.min_blocks, layout.max_blocks + 1))
    blocks: list[tuple[float, float]] = []
    attempts = 0
    while len(blocks) < n:
        attempts += 1
        if attempts > layout.max_retries * n:
            raise GenerationFailed(f"could not place {n} blocks with gap {layout.min_block_gap} m")
        x, y = (float(v) for v in rng.uniform(-half, half, size=2))
        if any(math.hypot(x - r.x, y - r.y) < layout.robot_clearance for r in (tutor, learner)):
            continue
        if any(math.hypot(x - bx, y - by) < layout.min_block_gap for bx, by in blocks):
            continue
        blocks.append((x, y))
    return tutor, learner, blocks


def scene_rng(corpus_seed: int, scene_id: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([corpus_seed, scene_id]))


def generate_scene(scene_id: int, seed: int = 0, noise: NoiseModel | None = None,
                   layout: LayoutConfig | None = None) -> Scene:
    """Generate one scene; the result depends only on ``(seed, scene_id)`` and the configs."""
    noise = noise or NoiseModel()
    layout = layout or LayoutConfig()
    rng = scene_rng(seed, scene_id)
    tutor_pose, learner_pose, blocks = _layout(layout, rng)
    n = len(blocks)
    tutor_ids = [f"obj-{i}" for i in rng.choice(1000, size=n, replace=False)]
    learner_ids = [f"obj-{i}" for i in rng.choice(1000, size=n, replace=False)]
    wall = normalize_angle(layout.wall_direction)
    truth = GroundTruthScene(
        objects=tuple(PerceivedObject(f"block-{i}", BLOCK, x, y) for i, (x, y) in enumerate(blocks)),
        tutor_pose=tutor_pose,
        learner_pose=learner_pose,
        wall_direction=wall,
    )
    tutor_wm = _world_model(TUTOR, tutor_pose, LEARNER, learner_pose, blocks, tutor_ids, wall, noise, rng)
    learner_wm = _world_model(LEARNER, learner_pose, TUTOR, tutor_pose, blocks, learner_ids, wall, noise, rng)
    return Scene(scene_id, truth, tutor_wm, learner_wm, tuple(zip(tutor_ids, learner_ids)))


def generate_corpus(n_scenes: int = 800, seed: int = 0, noise: NoiseModel | None = None,
                    layout: LayoutConfig | None = None) -> list[Scene]:
    return [generate_scene(i, seed, noise, layout) for i in range(n_scenes)]


# -- serialization ---------------------------------------------------------

def _pose_to_dict(p: Pose) -> dict:
    return {"x": p.x, "y": p.y, "heading": p.heading}


def _pose_from_dict(d: dict) -> Pose:
    return Pose(float(d["x"]), float(d["y"]), float(d["heading"]))


def _objects_to_list(objects) -> list:
    return [{"id": o.id, "kind": o.kind, "x": o.x, "y": o.y} for o in objects]


def _objects_from_list(items) -> tuple[PerceivedObject, ...]:
    return tuple(PerceivedObject(str(o["id"]), o["kind"], float(o["x"]), float(o["y"])) for o in items)


def _wm_to_dict(wm: WorldModel) -> dict:
    return {
        "owner": wm.owner,
        "other_robot_pose": _pose_to_dict(wm.other_robot_pose),
        "wall_bearing": wm.wall_bearing,
        "objects": _objects_to_list(wm.objects),
    }


def _wm_from_dict(d: dict) -> WorldModel:
    return WorldModel(d["owner"], _objects_from_list(d["objects"]),
                      _pose_from_dict(d["other_robot_pose"]), float(d["wall_bearing"]))


def scene_to_dict(scene: Scene) -> dict:
    t = scene.truth
    return {
        "id": scene.id,
        "truth": {
            "objects": _objects_to_list(t.objects),
            "tutor_pose": _pose_to_dict(t.tutor_pose),
            "learner_pose": _pose_to_dict(t.learner_pose),
            "wall_direction": t.wall_direction,
        },
        "tutor_wm": _wm_to_dict(scene.tutor_wm),
        "learner_wm": _wm_to_dict(scene.learner_wm),
        "correspondence": [list(p) for p in scene.correspondence],
    }


def scene_from_dict(d: dict) -> Scene:
    t = d["truth"]
    truth = GroundTruthScene(
        _objects_from_list(t["objects"]),
        _pose_from_dict(t["tutor_pose"]),
        _pose_from_dict(t["learner_pose"]),
        float(t["wall_direction"]),
    )
    return Scene(int(d["id"]), truth, _wm_from_dict(d["tutor_wm"]), _wm_from_dict(d["learner_wm"]),
                 tuple((str(a), str(b)) for a, b in d["correspondence"]))


def save_corpus(scenes: Iterable[Scene], path) -> None:
    """Write scenes as JSON lines after a one-line header.

    Floats go through ``repr`` so every value round-trips exactly.
    """
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(json.dumps({"format": CORPUS_FORMAT, "version": CORPUS_VERSION}) + "\n")
        for scene in scenes:
            fh.write(json.dumps(scene_to_dict(scene), separators=(",", ":")) + "\n")


def load_corpus(path) -> list[Scene]:
    scenes = []
    with open(path, encoding="utf-8") as fh:
        header_line = fh.readline()
        try:
            header = json.loads(header_line)
            fmt, version = header["format"], header["version"]
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise CorpusParseError(1, f"bad header: {exc}") from None
        if fmt != CORPUS_FORMAT:
            raise CorpusParseError(1, f"not a scene corpus (format {fmt!r})")
        if version != CORPUS_VERSION:
            raise UnsupportedVersion(f"corpus version {version} (supported: {CORPUS_VERSION})")
        for lineno, line in enumerate(fh, start=2):
            if not line.strip():
                continue
            try:
                scenes.append(scene_from_dict(json.loads(line)))
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                raise CorpusParseError(lineno, f"{type(exc).__name__}: {exc}") from None
    return scenes


def bearing_errors(scenes: Sequence[Scene]) -> list[float]:
    """Signed bearing errors of every perceived block against the ground truth."""
    errors = []
    for scene in scenes:
        truth = {o.id: o for o in scene.truth.objects}
        for side, pose in ((TUTOR, scene.truth.tutor_pose), (LEARNER, scene.truth.learner_pose)):
            wm = scene.world_model(side)
            for i, block in enumerate(b for b in wm.objects if b.kind == BLOCK):
                t = truth[f"block-{i}"]
                true_bearing, _ = polar(*pose.to_local(t.x, t.y))
                seen, _ = polar(block.x, block.y)
                errors.append(normalize_angle(seen - true_bearing))
    return errors
