"""Spatial categories and the similarity machinery built on them."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .errors import InvalidArgument, StrategyMismatch
from .geometry import ORIGIN, Pose, WorldModel, angular_distance, normalize_angle, polar, proximal_distance, signed_angle_diff

DEFAULT_INITIAL_SIGMA = 0.1


class StrategyKind(str, enum.Enum):
    PROJECTIVE = "projective"
    ABSOLUTE = "absolute"
    PROXIMAL = "proximal"

    @property
    def angular(self) -> bool:
        return self is not StrategyKind.PROXIMAL

    def __str__(self):
        return self.value


def parse_strategies(text: str | Iterable[str]) -> tuple[StrategyKind, ...]:
    """Parse ``"projective,proximal"`` (or an iterable of names) into strategies."""
    names = text.split(",") if isinstance(text, str) else list(text)
    out = []
    for name in names:
        name = str(name).strip().lower()
        if not name:
            continue
        try:
            kind = StrategyKind(name)
        except ValueError:
            raise InvalidArgument(f"unknown strategy {name!r}") from None
        if kind not in out:
            out.append(kind)
    return tuple(out)


@dataclass(frozen=True)
class FeatureValue:
    strategy: StrategyKind
    value: float

    def __post_init__(self):
        if not math.isfinite(self.value):
            raise InvalidArgument("feature value must be finite")
        if self.strategy.angular:
            object.__setattr__(self, "value", normalize_angle(self.value))
        elif self.value < 0:
            raise InvalidArgument(f"distance must be >= 0, got {self.value}")


@dataclass(frozen=True)
class SpatialCategory:
    id: str
    strategy: StrategyKind
    prototype: float
    sigma: float
    samples: tuple[float, ...] = ()

    def __post_init__(self):
        if not self.sigma > 0:
            raise InvalidArgument(f"category {self.id}: sigma must be > 0, got {self.sigma}")
        if self.strategy.angular:
            object.__setattr__(self, "prototype", normalize_angle(self.prototype))
        elif self.prototype < 0:
            raise InvalidArgument(f"category {self.id}: distance prototype must be >= 0")
        object.__setattr__(self, "samples", tuple(self.samples))


def _feature_from_polar(strategy: StrategyKind, angle: float, distance: float, wall_bearing: float) -> FeatureValue:
    if strategy is StrategyKind.PROJECTIVE:
        return FeatureValue(strategy, angle)
    if strategy is StrategyKind.ABSOLUTE:
        return FeatureValue(strategy, signed_angle_diff(angle, wall_bearing))
    return FeatureValue(strategy, distance)


def construe(wm: WorldModel, obj_id: str, strategy: StrategyKind, reference: Pose = ORIGIN) -> FeatureValue:
    """The feature ``strategy`` extracts for one object, seen from ``reference``.

    ``reference`` is expressed in ``wm``'s own frame. The wall bearing is
    rotated into the reference frame before absolute angles are taken.
    """
    return construe_all(wm, [obj_id], strategy, reference)[0]


def construe_all(wm: WorldModel, obj_ids: Sequence[str], strategy: StrategyKind,
                 reference: Pose = ORIGIN) -> list[FeatureValue]:
    wall = normalize_angle(wm.wall_bearing - reference.heading)
    out = []
    for obj_id in obj_ids:
        obj = wm.get(obj_id)
        angle, dist = polar(*reference.to_local(obj.x, obj.y))
        out.append(_feature_from_polar(strategy, angle, dist, wall))
    return out


def feature_distance(strategy: StrategyKind, a: float, b: float) -> float:
    if strategy.angular:
        return angular_distance(a, b)
    return proximal_distance(a, b)


def similarity(feature: FeatureValue, category: SpatialCategory) -> float:
    """Applicability of ``category`` to a feature: ``exp(-d / (2 sigma))``.

    The exponent takes the raw distance, not its square.
    """
    if feature.strategy is not category.strategy:
        raise StrategyMismatch(f"{feature.strategy} feature against {category.strategy} category {category.id}")
    d = feature_distance(category.strategy, feature.value, category.prototype)
    return math.exp(-d / (2.0 * category.sigma))


def invent_category(strategy: StrategyKind, topic: FeatureValue, category_id: str | None = None,
                    sigma: float = DEFAULT_INITIAL_SIGMA) -> SpatialCategory:
    if topic.strategy is not strategy:
        raise StrategyMismatch(f"cannot invent a {strategy} category from a {topic.strategy} feature")
    return SpatialCategory(category_id or f"{strategy.value}-new", strategy, topic.value, sigma, (topic.value,))


def discrimination_score(category: SpatialCategory, topic: FeatureValue, context: Iterable[FeatureValue]) -> float:
    """Similarity to the topic minus the best similarity to any distractor.

    An empty context scores the topic similarity alone.
    """
    best_other = 0.0
    for f in context:
        s = similarity(f, category)
        if s > best_other:
            best_other = s
    return similarity(topic, category) - best_other


def category_similarity(c: SpatialCategory, other: SpatialCategory) -> float:
    """Kernel comparing two categories: ``exp(-1/2 * diff**2 * 2 / (sigma + sigma'))``.

    Angular differences are wrapped before squaring. Categories built on
    different strategies are not comparable and score 0.
    """
    if c.strategy is not other.strategy:
        return 0.0
    if c.strategy.angular:
        diff = signed_angle_diff(c.prototype, other.prototype)
    else:
        diff = c.prototype - other.prototype
    return math.exp(-0.5 * diff * diff * 2.0 / (c.sigma + other.sigma))


# -- tutor inventories ------------------------------------------------------

HALF_PI = math.pi / 2.0

DEFAULT_INVENTORIES: dict[StrategyKind, tuple[tuple[str, float, float], ...]] = {
    StrategyKind.PROJECTIVE: (("front", 0.0, 0.4), ("left", HALF_PI, 0.4), ("back", math.pi, 0.4), ("right", -HALF_PI, 0.4)),
    StrategyKind.ABSOLUTE: (("north", 0.0, 0.4), ("west", HALF_PI, 0.4), ("south", math.pi, 0.4), ("east", -HALF_PI, 0.4)),
    # not given in the source material; chosen to discriminate in the default layout
    StrategyKind.PROXIMAL: (("near", 0.6, 0.5), ("far", 2.0, 0.5)),
}


def default_inventory(strategies: Iterable[StrategyKind | str]) -> list[tuple[str, SpatialCategory]]:
    """(word, category) pairs of the built-in English inventory for ``strategies``."""
    out = []
    for kind in parse_strategies([str(s) for s in strategies]):
        for word, proto, sigma in DEFAULT_INVENTORIES[kind]:
            out.append((word, SpatialCategory(f"tutor-{word}", kind, proto, sigma)))
    return out


def parse_inventory(text: str, source: str = "<inventory>") -> list[tuple[str, SpatialCategory]]:
    """Parse ``word strategy prototype sigma`` lines; ``#`` starts a comment.

    Angular prototypes are in radians; a ``deg`` suffix (``90deg``) is accepted.
    """
    out = []
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 4:
            raise InvalidArgument(f"{source}:{lineno}: expected 'word strategy prototype sigma'")
        word, strategy, proto, sigma = parts
        try:
            kind = StrategyKind(strategy.lower())
            value = math.radians(float(proto[:-3])) if proto.endswith("deg") else float(proto)
            cat = SpatialCategory(f"tutor-{word}", kind, value, float(sigma))
        except (ValueError, InvalidArgument) as exc:
            raise InvalidArgument(f"{source}:{lineno}: {exc}") from None
        if word in seen:
            raise InvalidArgument(f"{source}:{lineno}: duplicate word {word!r}")
        seen.add(word)
        out.append((word, cat))
    return out


def load_inventory(path) -> list[tuple[str, SpatialCategory]]:
    return parse_inventory(Path(path).read_text(encoding="utf-8"), str(path))


def format_inventory(entries: Iterable[tuple[str, SpatialCategory]]) -> str:
    lines = ["# word strategy prototype sigma"]
    for word, cat in entries:
        lines.append(f"{word} {cat.strategy.value} {cat.prototype!r} {cat.sigma!r}")
    return "\n".join(lines) + "\n"
