"""World geometry for the rotatable-RIS edge-computing scenario.

All entities (base station, RIS, user terminals) live in the z = 0 plane.
The RIS is a line segment of reflecting elements; its orientation is the
direction of that line, described by a unit 2-vector ``n0`` rotated by the
mechanical rotation angle ``delta`` (counterclockwise, radians). Angles to
entities are measured counterclockwise from the rotated plane direction, so
an entity at angle theta in [0, pi] sits in front of the surface and can be
served by reflection; theta in (pi, 2pi) is behind it.

Positions are numpy arrays of shape (3,) in meters with z = 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

TWO_PI = 2.0 * np.pi


class DegenerateGeometryError(ValueError):
    """An entity coincides with the RIS, so angles/distances are undefined."""


@dataclass
class MobilityParams:
    """Gauss-Markov mobility inside a disc.

    memory:        correlation of successive velocities, in [0, 1]
    mean_speed:    magnitude of each terminal's persistent mean velocity, m/s
    speed_std:     std of the per-step Gaussian velocity perturbation, m/s
    region_center: center of the allowed disc (z = 0), meters
    region_radius: radius of the allowed disc, meters
    """

    memory: float = 0.8
    mean_speed: float = 1.0
    speed_std: float = 0.3
    region_center: np.ndarray = field(default_factory=lambda: np.array([30.0, 10.0, 0.0]))
    region_radius: float = 5.0

    def __post_init__(self):
        self.region_center = np.asarray(self.region_center, dtype=float)
        if not 0.0 <= self.memory <= 1.0:
            raise ValueError(f"memory must be in [0, 1], got {self.memory}")
        if self.region_radius <= 0.0:
            raise ValueError("region_radius must be positive")


@dataclass
class RisPose:
    """Position and orientation of the reflecting surface.

    initial_plane_direction is the unit 2-vector of the element line at zero
    rotation; rotation is the mechanical angle applied on top of it.
    """

    position: np.ndarray = field(default_factory=lambda: np.array([30.0, 0.0, 0.0]))
    initial_plane_direction: np.ndarray = field(default_factory=lambda: np.array([0.0, -1.0]))
    rotation: float = 0.0

    def __post_init__(self):
        self.position = np.asarray(self.position, dtype=float)
        n0 = np.asarray(self.initial_plane_direction, dtype=float)
        norm = float(np.hypot(n0[0], n0[1]))
        if norm == 0.0:
            raise ValueError("initial_plane_direction must be nonzero")
        self.initial_plane_direction = n0 / norm

    def plane_direction(self) -> np.ndarray:
        """Unit 2-vector of the element line after applying the rotation."""
        c, s = np.cos(self.rotation), np.sin(self.rotation)
        n0 = self.initial_plane_direction
        return np.array([c * n0[0] - s * n0[1], s * n0[0] + c * n0[1]])


@dataclass
class AngleSet:
    """Plane-relative angles of all entities for one slot.

    theta0_*: angles at zero rotation, in [0, 2pi)
    theta_*:  angles after subtracting the rotation, reduced into [0, 2pi)
    indicator_k: 1 where theta_k is in [0, pi] (terminal in front of the RIS)
    """

    theta0_k: np.ndarray
    theta0_b: float
    theta_k: np.ndarray
    theta_b: float
    indicator_k: np.ndarray


@dataclass
class ScenarioConfig:
    """Static world layout: station/RIS placement plus terminal mobility."""

    bs_position: np.ndarray = field(default_factory=lambda: np.array([0.0, 0.0, 0.0]))
    ris: RisPose = field(default_factory=RisPose)
    num_ues: int = 12
    mobility: MobilityParams = field(default_factory=MobilityParams)

    def __post_init__(self):
        self.bs_position = np.asarray(self.bs_position, dtype=float)
        if self.num_ues < 1:
            raise ValueError("num_ues must be >= 1")


@dataclass
class WorldState:
    """Per-slot dynamic state: terminal kinematics and the current RIS pose."""

    positions: np.ndarray       # (K, 3)
    velocities: np.ndarray      # (K, 3)
    mean_velocities: np.ndarray # (K, 3), persistent per-terminal drift
    ris: RisPose


def _planar_angle(vec2: np.ndarray) -> float:
    return float(np.arctan2(vec2[..., 1], vec2[..., 0]))


def angles_from_geometry(ris: RisPose, bs_position: np.ndarray, ue_positions: np.ndarray) -> AngleSet:
    """Compute plane-relative angles of the BS and every terminal.

    theta0 is the counterclockwise angle from the zero-rotation plane
    direction to the RIS->entity direction, in [0, 2pi); theta subtracts the
    current rotation and is reduced back into [0, 2pi).
    """
    ue_positions = np.atleast_2d(np.asarray(ue_positions, dtype=float))
    bs_position = np.asarray(bs_position, dtype=float)

    base = _planar_angle(ris.initial_plane_direction)

    def theta0_of(point):
        d = point[:2] - ris.position[:2]
        if np.hypot(d[0], d[1]) < 1e-12:
            raise DegenerateGeometryError("entity coincides with the RIS position")
        return (np.arctan2(d[1], d[0]) - base) % TWO_PI

    theta0_b = theta0_of(bs_position)
    theta0_k = np.array([theta0_of(p) for p in ue_positions])
    theta_b = (theta0_b - ris.rotation) % TWO_PI
    theta_k = (theta0_k - ris.rotation) % TWO_PI
    indicator = (theta_k <= np.pi).astype(float)
    return AngleSet(theta0_k=theta0_k, theta0_b=theta0_b, theta_k=theta_k,
                    theta_b=theta_b, indicator_k=indicator)


def rotation_bounds(theta0_b: float) -> tuple[float, float]:
    """Rotation interval keeping the BS in front of the surface.

    Any rotation delta in [theta0_b - pi, theta0_b] yields theta_b in [0, pi].
    """
    return (theta0_b - np.pi, theta0_b)


def distances(ris: RisPose, bs_position: np.ndarray, ue_positions: np.ndarray) -> tuple[np.ndarray, float]:
    """Far-field center distances RIS<->terminals and RIS<->BS, meters."""
    ue_positions = np.atleast_2d(np.asarray(ue_positions, dtype=float))
    d_ue = np.linalg.norm(ue_positions - ris.position, axis=1)
    d_bs = float(np.linalg.norm(np.asarray(bs_position, dtype=float) - ris.position))
    if d_bs < 1e-12 or np.any(d_ue < 1e-12):
        raise DegenerateGeometryError("zero distance to the RIS")
    return d_ue, d_bs


def element_positions(ris: RisPose, num_elements: int, spacing: float) -> np.ndarray:
    """(N, 3) element centers along the rotated plane direction.

    Elements form a uniform line centered on the RIS position; spacing is in
    meters (half a wavelength by convention).
    """
    u = ris.plane_direction()
    offsets = (np.arange(num_elements) - (num_elements - 1) / 2.0) * spacing
    pos = np.zeros((num_elements, 3))
    pos[:, 0] = ris.position[0] + offsets * u[0]
    pos[:, 1] = ris.position[1] + offsets * u[1]
    pos[:, 2] = ris.position[2]
    return pos


def element_distances(ris: RisPose, num_elements: int, spacing: float, points: np.ndarray) -> np.ndarray:
    """Per-element distances to one or more points.

    Used for the line-of-sight phase structure; amplitudes use the single
    far-field center distance instead.
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    elems = element_positions(ris, num_elements, spacing)
    diff = points[:, None, :] - elems[None, :, :]
    d = np.linalg.norm(diff, axis=2)
    return d if d.shape[0] > 1 else d[0]


def initial_world(config: ScenarioConfig, rng: np.random.Generator) -> WorldState:
    """Drop terminals uniformly in the disc with random persistent drift."""
    mob = config.mobility
    k = config.num_ues
    r = mob.region_radius * np.sqrt(rng.uniform(size=k))
    phi = rng.uniform(0.0, TWO_PI, size=k)
    positions = np.zeros((k, 3))
    positions[:, 0] = mob.region_center[0] + r * np.cos(phi)
    positions[:, 1] = mob.region_center[1] + r * np.sin(phi)

    psi = rng.uniform(0.0, TWO_PI, size=k)
    mean_v = np.zeros((k, 3))
    mean_v[:, 0] = mob.mean_speed * np.cos(psi)
    mean_v[:, 1] = mob.mean_speed * np.sin(psi)
    return WorldState(positions=positions, velocities=mean_v.copy(),
                      mean_velocities=mean_v,
                      ris=RisPose(config.ris.position.copy(),
                                  config.ris.initial_plane_direction.copy(),
                                  config.ris.rotation))


def step_mobility(positions: np.ndarray, velocities: np.ndarray, mean_velocities: np.ndarray,
                  params: MobilityParams, dt: float,
                  rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """One Gauss-Markov mobility step with reflection at the disc boundary.

    v' = m v + (1 - m) v_mean + sqrt(1 - m^2) * N(0, speed_std^2) per axis,
    then positions advance by v' dt. A terminal crossing the boundary is
    mirrored back inside and the radial components of its velocity and mean
    velocity are flipped so it does not keep pushing outward.
    """
    m = params.memory
    noise = rng.normal(0.0, params.speed_std, size=(positions.shape[0], 2))
    v = np.array(velocities, copy=True)
    v[:, :2] = m * velocities[:, :2] + (1.0 - m) * mean_velocities[:, :2] \
        + np.sqrt(max(0.0, 1.0 - m * m)) * noise
    v[:, 2] = 0.0

    p = positions + v * dt
    mean_v = np.array(mean_velocities, copy=True)

    center = params.region_center
    radius = params.region_radius
    rel = p[:, :2] - center[:2]
    dist = np.hypot(rel[:, 0], rel[:, 1])
    outside = dist > radius
    for i in np.flatnonzero(outside):
        u = rel[i] / dist[i]
        reflected = 2.0 * radius - dist[i]
        p[i, :2] = center[:2] + u * max(reflected, 0.0)
        v[i, :2] -= 2.0 * np.dot(v[i, :2], u) * u
        mean_v[i, :2] -= 2.0 * np.dot(mean_v[i, :2], u) * u
    p[:, 2] = 0.0
    return p, v, mean_v
