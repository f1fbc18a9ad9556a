"""Positions of the BS, relay, waveguide and users, and pinching-antenna placement."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

ON_SEGMENT_TOL = 1e-9


@dataclass(frozen=True)
class Point3:
    x: float
    y: float
    z: float

    def __post_init__(self):
        for name in ("x", "y", "z"):
            v = float(getattr(self, name))
            if not math.isfinite(v):
                raise ValueError(f"coordinate {name} must be finite, got {v!r}")
            object.__setattr__(self, name, v)

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    @classmethod
    def from_array(cls, a) -> "Point3":
        return cls(float(a[0]), float(a[1]), float(a[2]))

    def __add__(self, other: "Point3") -> "Point3":
        return Point3(self.x + other.x, self.y + other.y, self.z + other.z)

    def __sub__(self, other: "Point3") -> "Point3":
        return Point3(self.x - other.x, self.y - other.y, self.z - other.z)


def distance(a: Point3, b: Point3) -> float:
    return math.sqrt((a.x - b.x) ** 2 + (a.y - b.y) ** 2 + (a.z - b.z) ** 2)


@dataclass(frozen=True)
class Waveguide:
    """A straight waveguide segment of length ``span`` starting at ``feed_point``.

    ``axis`` is normalized on construction; it must be horizontal so that the
    whole segment sits at ``height``.
    """

    feed_point: Point3
    axis: Point3
    span: float
    height: float = field(init=False)

    def __post_init__(self):
        if not self.span > 0:
            raise ValueError(f"waveguide span must be positive, got {self.span!r}")
        norm = math.sqrt(self.axis.x ** 2 + self.axis.y ** 2 + self.axis.z ** 2)
        if norm == 0.0:
            raise ValueError("waveguide axis must be non-zero")
        if abs(self.axis.z) > 1e-12 * norm:
            raise ValueError("waveguide axis must be horizontal")
        object.__setattr__(self, "axis", Point3(self.axis.x / norm, self.axis.y / norm, 0.0))
        object.__setattr__(self, "height", self.feed_point.z)

    def point_at(self, s: float) -> Point3:
        a = self.axis
        f = self.feed_point
        return Point3(f.x + s * a.x, f.y + s * a.y, f.z)

    @property
    def end_point(self) -> Point3:
        return self.point_at(self.span)


@dataclass(frozen=True)
class ServiceArea:
    origin: Point3
    side_x: float
    side_y: float

    def __post_init__(self):
        if self.side_x < 0 or self.side_y < 0:
            raise ValueError("service area sides must be non-negative")


@dataclass(frozen=True)
class SystemGeometry:
    bs_position: Point3
    relay_rx_position: Point3
    waveguide: Waveguide
    service_area: ServiceArea
    bs_relay_distance: float

    def __post_init__(self):
        d = distance(self.bs_position, self.relay_rx_position)
        if abs(d - self.bs_relay_distance) > 1e-9:
            raise ValueError(
                f"BS-relay distance {self.bs_relay_distance} disagrees with positions ({d})"
            )
        if self.waveguide.height < self.service_area.origin.z:
            raise ValueError("waveguide must lie above the service area")

    def with_bs_relay_distance(self, d: float) -> "SystemGeometry":
        """Same layout with the BS moved along the BS-relay line to distance ``d``.

        Equivalent, up to a translation, to moving relay and service area away
        from a fixed BS.
        """
        if d < 0:
            raise ValueError("BS-relay distance must be non-negative")
        r = self.relay_rx_position
        if self.bs_relay_distance > 0:
            u = (self.bs_position - r).as_array() / self.bs_relay_distance
        else:
            u = -self.waveguide.axis.as_array()
        bs = Point3.from_array(r.as_array() + d * u)
        return SystemGeometry(bs, r, self.waveguide, self.service_area, float(d))


def canonical_geometry(bs_relay_distance: float = 50.0, height: float = 3.0,
                       side: float = 10.0) -> SystemGeometry:
    """Relay feed at (0, side/2, height), waveguide along +x over the square
    ``[0, side]^2`` on the ground, BS at ``(-D, side/2, height)``."""
    if bs_relay_distance < 0:
        raise ValueError("BS-relay distance must be non-negative")
    if not height > 0:
        raise ValueError("waveguide height must be positive")
    if not side > 0:
        raise ValueError("service area side must be positive")
    feed = Point3(0.0, side / 2.0, height)
    return SystemGeometry(
        bs_position=Point3(-bs_relay_distance, side / 2.0, height),
        relay_rx_position=feed,
        waveguide=Waveguide(feed, Point3(1.0, 0.0, 0.0), side),
        service_area=ServiceArea(Point3(0.0, 0.0, 0.0), side, side),
        bs_relay_distance=bs_relay_distance,
    )


def user_from_uniforms(area: ServiceArea, u1, u2):
    """Map uniforms on (0, 1) to ground-plane user coordinates."""
    return (area.origin.x + area.side_x * u1,
            area.origin.y + area.side_y * u2)


def draw_user(area: ServiceArea, rng_stream) -> Point3:
    """Uniform user drop on the service area floor; consumes one block."""
    u1, u2 = rng_stream.uniform_pairs(1)
    x, y = user_from_uniforms(area, float(u1[0]), float(u2[0]))
    return Point3(x, y, area.origin.z)


def pa_arc_lengths(wg: Waveguide, ux, uy) -> np.ndarray:
    """Arc position of the best pinching antenna for users at ``(ux, uy)``.

    All PA candidates share one height, so the closest one is the orthogonal
    projection of the user onto the axis, clamped to the segment.
    """
    f = wg.feed_point
    s = (np.asarray(ux) - f.x) * wg.axis.x + (np.asarray(uy) - f.y) * wg.axis.y
    return np.clip(s, 0.0, wg.span)


def pa_position_for_user(wg: Waveguide, user: Point3) -> Point3:
    return wg.point_at(float(pa_arc_lengths(wg, user.x, user.y)))


def arc_length_to_pa(wg: Waveguide, pa: Point3) -> float:
    """Distance along the waveguide from its feed point to ``pa``."""
    f = wg.feed_point
    s = (pa.x - f.x) * wg.axis.x + (pa.y - f.y) * wg.axis.y
    off = distance(wg.point_at(s), pa)
    if off > ON_SEGMENT_TOL or s < -ON_SEGMENT_TOL or s > wg.span + ON_SEGMENT_TOL:
        raise ValueError(f"point {pa} is not on the waveguide segment")
    return min(max(s, 0.0), wg.span)
