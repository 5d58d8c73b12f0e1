"""Per-terminal per-slot transmit power selection.

The slot energy alpha*D*p / (B log2(1 + p|h|^2/sigma^2)) is a ratio of a
linear numerator and a concave denominator, so a Dinkelbach iteration solves
it exactly: fix the current ratio y, minimize the decoupled objective
alpha*D*p - y*B*log2(1 + p|h|^2/sigma^2) in closed form, update y, repeat.
The ratio sequence is non-increasing and converges to the optimum.

Numerically the energy turns out to be strictly increasing in p, so the
optimum sits at the feasibility lower bound p_hat (the power that fills the
whole slot). The environment uses that closed form directly; the iteration
here is the reference solver and test oracle, also exposed on the CLI.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

LN2 = float(np.log(2.0))


class InfeasiblePowerError(ValueError):
    """No transmit power can deliver the requested bits in one slot."""


@dataclass
class PowerInstance:
    """One terminal-slot power subproblem (SI units).

    offload_bits: alpha * D, bits to push this slot
    bandwidth:    the terminal's bandwidth slice B_k, Hz
    gain:         |h|^2 of the effective channel
    noise:        receiver noise power, watts
    p_max:        transmit power cap, watts
    tau:          slot length, seconds
    """

    offload_bits: float
    bandwidth: float
    gain: float
    noise: float
    p_max: float
    tau: float

    def __post_init__(self):
        if self.offload_bits < 0.0:
            raise ValueError("offload_bits must be >= 0")
        for name in ("bandwidth", "noise", "p_max", "tau"):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"{name} must be positive")

    def energy(self, p: float | np.ndarray) -> float | np.ndarray:
        """Slot transmit energy alpha*D*p / rate(p), joules."""
        rate = self.bandwidth * np.log2(1.0 + np.asarray(p) * self.gain / self.noise)
        out = self.offload_bits * np.asarray(p) / rate
        return float(out) if np.ndim(out) == 0 else out


@dataclass
class DinkelbachSettings:
    tol: float = 1e-8
    max_iter: int = 50

    def __post_init__(self):
        if self.tol <= 0.0 or self.max_iter < 1:
            raise ValueError("tol must be > 0 and max_iter >= 1")


@dataclass
class DinkelbachResult:
    power: float
    energy: float
    iterations: int
    converged: bool
    y_history: list[float] = field(default_factory=list)


def min_feasible_power(inst: PowerInstance) -> float:
    """Smallest power completing the slot's bits within tau.

    p_hat = sigma^2 (2^(bits/(tau B)) - 1) / |h|^2; at p_hat the airtime is
    exactly tau. Values above p_max are returned as is: the caller treats
    p_hat > p_max as a constraint violation rather than clamping it away.
    """
    if inst.offload_bits == 0.0:
        return 0.0
    if inst.gain <= 0.0:
        raise InfeasiblePowerError("zero channel gain with bits to offload")
    exponent = inst.offload_bits / (inst.tau * inst.bandwidth)
    return inst.noise * (np.exp2(exponent) - 1.0) / inst.gain


def dinkelbach_solve(inst: PowerInstance,
                     settings: DinkelbachSettings | None = None) -> DinkelbachResult:
    """Minimize the slot energy over p in [p_hat, p_max] by ratio iteration.

    For the current ratio y the decoupled objective is convex in p with the
    stationary point p = y B / (ln2 * alpha D) - sigma^2/|h|^2, clamped to the
    feasible interval. Stops when the ratio moves by less than tol relative,
    returning the best iterate with converged=False if max_iter is hit first.
    """
    settings = settings or DinkelbachSettings()
    if inst.offload_bits == 0.0:
        return DinkelbachResult(power=0.0, energy=0.0, iterations=0,
                                converged=True, y_history=[0.0])
    p_hat = min_feasible_power(inst)
    if p_hat > inst.p_max:
        raise InfeasiblePowerError(
            f"minimum feasible power {p_hat:.3e} W exceeds the cap {inst.p_max:.3e} W")

    p = inst.p_max
    y = inst.energy(p)
    history = [y]
    converged = False
    iterations = 0
    for iterations in range(1, settings.max_iter + 1):
        stationary = y * inst.bandwidth / (LN2 * inst.offload_bits) - inst.noise / inst.gain
        p = min(max(stationary, p_hat), inst.p_max)
        y_new = inst.energy(p)
        history.append(y_new)
        if abs(y_new - y) <= settings.tol * y:
            y = y_new
            converged = True
            break
        y = y_new
    return DinkelbachResult(power=float(p), energy=float(y), iterations=iterations,
                            converged=converged, y_history=[float(v) for v in history])
