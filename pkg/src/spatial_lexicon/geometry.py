"""Planar geometry: angles, poses, world models and perspective changes.

Angles are plain floats in radians, normalized to ``(-pi, pi]`` and measured
counterclockwise from the x-axis, so an object to the left of an agent sits at
``+pi/2``. Positions are stored as Cartesian pairs; polar features are derived.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from .errors import InvalidArgument, ObjectNotFound

TWO_PI = 2.0 * math.pi

BLOCK = "block"
ROBOT = "robot"
WALL_MARKER = "wall-marker"
OBJECT_KINDS = (BLOCK, ROBOT, WALL_MARKER)


def normalize_angle(raw: float) -> float:
    """Map ``raw`` onto the half-open interval ``(-pi, pi]``."""
    if not math.isfinite(raw):
        raise InvalidArgument(f"angle must be finite, got {raw!r}")
    a = math.fmod(raw, TWO_PI)
    if a <= -math.pi:
        a += TWO_PI
    elif a > math.pi:
        a -= TWO_PI
    return a


def signed_angle_diff(a: float, b: float) -> float:
    """Return ``a - b`` wrapped to ``(-pi, pi]``."""
    return normalize_angle(a - b)


def angular_distance(a_o: float, a_c: float) -> float:
    """Circular distance between two angles, in ``[0, pi]``."""
    d = abs(a_o - a_c) % TWO_PI
    return TWO_PI - d if d > math.pi else d


def proximal_distance(d_o: float, d_c: float) -> float:
    return abs(d_o - d_c)


@dataclass(frozen=True)
class Pose:
    x: float
    y: float
    heading: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise InvalidArgument(f"pose position must be finite: ({self.x}, {self.y})")
        object.__setattr__(self, "heading", normalize_angle(self.heading))

    def to_local(self, x: float, y: float) -> tuple[float, float]:
        """Express the point ``(x, y)`` in this pose's frame."""
        dx, dy = x - self.x, y - self.y
        c, s = math.cos(self.heading), math.sin(self.heading)
        return c * dx + s * dy, -s * dx + c * dy

    def to_parent(self, x: float, y: float) -> tuple[float, float]:
        """Inverse of :meth:`to_local`."""
        c, s = math.cos(self.heading), math.sin(self.heading)
        return self.x + c * x - s * y, self.y + s * x + c * y

    def relative(self, other: Pose) -> Pose:
        """``other`` re-expressed in this pose's frame."""
        x, y = self.to_local(other.x, other.y)
        return Pose(x, y, other.heading - self.heading)

    def inverse(self) -> Pose:
        """The parent frame's origin as seen from this pose."""
        return self.relative(Pose(0.0, 0.0, 0.0))


ORIGIN = Pose(0.0, 0.0, 0.0)


@dataclass(frozen=True)
class PerceivedObject:
    id: str
    kind: str
    x: float
    y: float

    def __post_init__(self):
        if self.kind not in OBJECT_KINDS:
            raise InvalidArgument(f"unknown object kind {self.kind!r}")
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise InvalidArgument(f"object {self.id} has non-finite position")


@dataclass(frozen=True)
class WorldModel:
    """One agent's private, egocentric view of a scene.

    ``other_robot_pose`` is the perceiver's estimate of its interlocutor and
    ``wall_bearing`` the egocentric direction of the global wall marker.
    """

    owner: str
    objects: tuple[PerceivedObject, ...]
    other_robot_pose: Pose
    wall_bearing: float
    _index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        objects = tuple(self.objects)
        object.__setattr__(self, "objects", objects)
        object.__setattr__(self, "wall_bearing", normalize_angle(self.wall_bearing))
        index = {}
        for obj in objects:
            if obj.id in index:
                raise InvalidArgument(f"duplicate object id {obj.id!r} in world model of {self.owner}")
            index[obj.id] = obj
        object.__setattr__(self, "_index", index)

    def get(self, obj_id: str) -> PerceivedObject:
        try:
            return self._index[obj_id]
        except KeyError:
            raise ObjectNotFound(obj_id) from None

    def __contains__(self, obj_id) -> bool:
        return obj_id in self._index

    @property
    def blocks(self) -> tuple[PerceivedObject, ...]:
        return tuple(o for o in self.objects if o.kind == BLOCK)

    def block_ids(self) -> list[str]:
        return [o.id for o in self.objects if o.kind == BLOCK]


def polar(x: float, y: float) -> tuple[float, float]:
    """(angle, distance) of a point seen from the origin."""
    return normalize_angle(math.atan2(y, x)), math.hypot(x, y)


def egocentric_features(wm: WorldModel, obj_id: str) -> tuple[float, float]:
    """Angle and distance of an object from the owner of ``wm``."""
    obj = wm.get(obj_id)
    return polar(obj.x, obj.y)


def transform_perspective(wm: WorldModel, target: Pose) -> WorldModel:
    """Re-express ``wm`` in the frame of ``target`` (given in ``wm``'s frame)."""
    objects = []
    for obj in wm.objects:
        x, y = target.to_local(obj.x, obj.y)
        objects.append(replace(obj, x=x, y=y))
    return WorldModel(
        owner=wm.owner,
        objects=tuple(objects),
        other_robot_pose=target.relative(wm.other_robot_pose),
        wall_bearing=wm.wall_bearing - target.heading,
    )

