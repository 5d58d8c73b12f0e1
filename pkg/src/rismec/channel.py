"""Random channel draws, orientation-dependent RIS gain, and rates.

Both RIS hops are Rician: a deterministic unit-modulus line-of-sight phasor
(with per-element path lengths, so the array has a steering structure) plus
a circularly symmetric Gaussian scattered part, scaled by sqrt(rho0 / d^alpha).
The terminal->BS link is blocked, so it is Rayleigh with an extra attenuation.

Every element applies one discrete phase from a b-bit codebook, and the
per-element power pattern is Lambertian: max(sin theta, 0)^z on each side of
the reflection, which is exactly the in-front indicator composed with sin^z.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .scenario import AngleSet, RisPose, element_distances

INV_SQRT2 = 1.0 / np.sqrt(2.0)


@dataclass
class ChannelParams:
    """Large-scale and small-scale channel parameters (SI units).

    rho0:            linear power path loss at 1 m
    alpha_ue_ris:    path-loss exponent, terminal -> RIS
    alpha_ris_bs:    path-loss exponent, RIS -> BS
    rician_ue_ris:   linear Rician factor of the terminal -> RIS hop
    rician_ris_bs:   linear Rician factor of the RIS -> BS hop
    wavelength:      carrier wavelength, meters (sets the LoS phase structure)
    noise_power:     receiver noise power, watts
    total_bandwidth: shared uplink bandwidth, Hz; each of num_ues terminals
                     gets an equal slice
    alpha_direct / direct_extra_loss: blocked direct-link path-loss exponent
                     and extra linear attenuation (>= 1 divides the power)
    """

    rho0: float = 1e-3
    alpha_ue_ris: float = 2.0
    alpha_ris_bs: float = 2.0
    rician_ue_ris: float = 10.0
    rician_ris_bs: float = 10.0
    wavelength: float = 0.125
    noise_power: float = 1e-14
    total_bandwidth: float = 12e6
    num_ues: int = 12
    alpha_direct: float = 3.5
    direct_extra_loss: float = 100.0
    element_spacing_wavelengths: float = 0.5

    def __post_init__(self):
        for name in ("rho0", "wavelength", "noise_power", "total_bandwidth"):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"{name} must be positive")
        if self.num_ues < 1:
            raise ValueError("num_ues must be >= 1")

    @property
    def bandwidth_per_ue(self) -> float:
        return self.total_bandwidth / self.num_ues

    @property
    def element_spacing(self) -> float:
        return self.element_spacing_wavelengths * self.wavelength


@dataclass
class RadiationParams:
    """Element power pattern: Lambertian order z, peak directivity d_max."""

    z: float = 2.0
    d_max: float = 6.0

    def __post_init__(self):
        if self.z < 0.0:
            raise ValueError("z must be >= 0")
        if self.d_max <= 0.0:
            raise ValueError("d_max must be positive")


@dataclass
class PhaseConfig:
    """A b-bit discrete phase assignment for all N elements."""

    bits: int
    phases: np.ndarray

    def __post_init__(self):
        self.phases = np.asarray(self.phases, dtype=float)
        book = phase_codebook(self.bits)
        step = book[1] - book[0] if len(book) > 1 else 2.0 * np.pi
        snapped = np.round(self.phases / step) * step
        if np.max(np.abs(snapped - self.phases)) > 1e-9 or np.any(self.phases > book[-1] + 1e-9) \
                or np.any(self.phases < -1e-9):
            raise ValueError("phases must be members of the b-bit codebook")


@dataclass
class ChannelDraw:
    """One slot's channel realization.

    ue_ris: (K, N) complex, terminal k -> element n
    ris_bs: (N,)   complex, element n -> BS
    ue_bs:  (K,)   complex, blocked direct links
    """

    ue_ris: np.ndarray
    ris_bs: np.ndarray
    ue_bs: np.ndarray


@dataclass
class LinkGeometry:
    """Distances feeding one channel draw.

    Center distances scale the amplitudes; per-element distances only set the
    line-of-sight phases (far-field assumption).
    """

    d_ue_ris: np.ndarray        # (K,)
    d_ris_bs: float
    d_ue_bs: np.ndarray         # (K,)
    elem_d_ue_ris: np.ndarray   # (K, N)
    elem_d_ris_bs: np.ndarray   # (N,)


def link_geometry(ris: RisPose, bs_position: np.ndarray, ue_positions: np.ndarray,
                  num_elements: int, spacing: float) -> LinkGeometry:
    """Assemble center and per-element distances for the current pose."""
    from .scenario import distances as center_distances

    ue_positions = np.atleast_2d(np.asarray(ue_positions, dtype=float))
    d_ue, d_bs = center_distances(ris, bs_position, ue_positions)
    d_ue_bs = np.linalg.norm(ue_positions - np.asarray(bs_position, dtype=float), axis=1)
    elem_ue = element_distances(ris, num_elements, spacing, ue_positions)
    elem_ue = np.atleast_2d(elem_ue)
    elem_bs = element_distances(ris, num_elements, spacing, np.asarray(bs_position, dtype=float))
    return LinkGeometry(d_ue_ris=d_ue, d_ris_bs=d_bs, d_ue_bs=d_ue_bs,
                        elem_d_ue_ris=elem_ue, elem_d_ris_bs=np.atleast_1d(elem_bs))


def phase_codebook(bits: int) -> np.ndarray:
    """The 2^bits equally spaced phases {0, 2^(1-b) pi, ..., (2 - 2^(1-b)) pi}."""
    if bits < 1:
        raise ValueError("bits must be >= 1")
    step = 2.0 ** (1 - bits) * np.pi
    return np.arange(2 ** bits) * step


@dataclass
class NlosDraw:
    """Scattered (Gaussian) components, kept separate so the same fading can
    be re-evaluated under a different RIS pose."""

    ue_ris: np.ndarray
    ris_bs: np.ndarray
    ue_bs: np.ndarray


def draw_nlos(params: ChannelParams, num_ues: int, num_elements: int,
              rng: np.random.Generator) -> NlosDraw:
    """Unit-variance circularly symmetric Gaussian scatter terms."""

    def cn(shape):
        return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) * INV_SQRT2

    return NlosDraw(ue_ris=cn((num_ues, num_elements)),
                    ris_bs=cn(num_elements),
                    ue_bs=cn(num_ues))


def assemble_channels(params: ChannelParams, geom: LinkGeometry, nlos: NlosDraw) -> ChannelDraw:
    """Combine LoS steering phasors with scattered terms at the right scale."""
    k1, k2 = params.rician_ue_ris, params.rician_ris_bs
    wave = 2.0 * np.pi / params.wavelength

    amp_ue = np.sqrt(params.rho0 / geom.d_ue_ris ** params.alpha_ue_ris)
    los_ue = np.exp(-1j * wave * geom.elem_d_ue_ris)
    ue_ris = amp_ue[:, None] * (np.sqrt(k1 / (1.0 + k1)) * los_ue
                                + np.sqrt(1.0 / (1.0 + k1)) * nlos.ue_ris)

    amp_bs = np.sqrt(params.rho0 / geom.d_ris_bs ** params.alpha_ris_bs)
    los_bs = np.exp(-1j * wave * geom.elem_d_ris_bs)
    ris_bs = amp_bs * (np.sqrt(k2 / (1.0 + k2)) * los_bs
                       + np.sqrt(1.0 / (1.0 + k2)) * nlos.ris_bs)

    amp_direct = np.sqrt(params.rho0 / geom.d_ue_bs ** params.alpha_direct
                         / params.direct_extra_loss)
    ue_bs = amp_direct * nlos.ue_bs
    return ChannelDraw(ue_ris=ue_ris, ris_bs=ris_bs, ue_bs=ue_bs)


def draw_channels(params: ChannelParams, geom: LinkGeometry, rng: np.random.Generator) -> ChannelDraw:
    """Draw one slot's channels for the given geometry."""
    k, n = geom.elem_d_ue_ris.shape
    return assemble_channels(params, geom, draw_nlos(params, k, n, rng))


def pattern_gain(rad: RadiationParams, theta_k: float, theta_b: float) -> float:
    """Scalar amplitude pattern d_max^2 * sin^z(theta_k) * sin^z(theta_b).

    max(sin, 0) encodes the in-front indicator on both sides, so angles
    behind the surface give exactly zero.
    """
    s_k = max(np.sin(theta_k), 0.0)
    s_b = max(np.sin(theta_b), 0.0)
    return rad.d_max ** 2 * s_k ** rad.z * s_b ** rad.z


def ris_gain(rad: RadiationParams, angles: AngleSet, phases: PhaseConfig | np.ndarray,
             ue_index: int) -> np.ndarray:
    """Per-element complex reflection gain for one terminal."""
    phi = phases.phases if isinstance(phases, PhaseConfig) else np.asarray(phases, dtype=float)
    amp = pattern_gain(rad, float(angles.theta_k[ue_index]), angles.theta_b)
    return amp * np.exp(1j * phi)


def effective_channel(draw: ChannelDraw, gain: np.ndarray, ue_index: int) -> complex:
    """Cascade one terminal's reflected path and add the direct link."""
    if gain.shape[0] != draw.ris_bs.shape[0] or gain.shape[0] != draw.ue_ris.shape[1]:
        raise ValueError("gain vector length does not match the element count")
    return complex(np.vdot(draw.ris_bs, gain * draw.ue_ris[ue_index]) + draw.ue_bs[ue_index])


def effective_channels(draw: ChannelDraw, rad: RadiationParams, angles: AngleSet,
                       phases: np.ndarray) -> np.ndarray:
    """All terminals' effective channels for one phase vector (vectorized)."""
    phasor = np.exp(1j * phases)
    pat = rad.d_max ** 2 \
        * np.maximum(np.sin(angles.theta_k), 0.0) ** rad.z \
        * max(np.sin(angles.theta_b), 0.0) ** rad.z
    cascade = (np.conj(draw.ris_bs)[None, :] * draw.ue_ris) @ phasor
    return pat * cascade + draw.ue_bs


def achievable_rate(h: complex | np.ndarray, power: float | np.ndarray,
                    params: ChannelParams) -> float | np.ndarray:
    """Shannon rate over the per-terminal bandwidth slice, bits/s."""
    snr = np.asarray(power) * np.abs(np.asarray(h)) ** 2 / params.noise_power
    rate = params.bandwidth_per_ue * np.log2(1.0 + snr)
    return float(rate) if np.ndim(rate) == 0 else rate
