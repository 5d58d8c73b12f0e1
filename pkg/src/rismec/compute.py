"""Task, latency, and energy model with closed-form resource allocations.

Each terminal owns one task of D bits at C cycles/bit per cycle of duration T,
split into Q slots of length tau. A fraction eta of the bits goes to the edge
(accumulated over slots 1..Q-1); the remainder runs locally. Local energy is
c * f^2 * D * C * (1 - eta), so the energy-optimal local frequency stretches
the local work across the whole cycle, and the edge allocation packs the
offloaded work into the last Q-1 slots.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple


class InfeasibleOperation(ValueError):
    """A time/energy expression was requested outside its feasible domain."""


@dataclass
class TaskSpec:
    """Per-terminal task and timing parameters (SI units).

    size_bits:      D, task size in bits
    cycles_per_bit: C, CPU cycles per bit
    capacitance:    c, effective switched-capacitance coefficient
    f_loc_max:      local CPU frequency cap, Hz
    f_edge_total:   total edge CPU frequency shared by all terminals, Hz
    cycle_time:     T, seconds
    num_slots:      Q; the slot length tau is T / Q
    """

    size_bits: float = 1e7
    cycles_per_bit: float = 600.0
    capacitance: float = 1e-27
    f_loc_max: float = 6e8
    f_edge_total: float = 1e10
    cycle_time: float = 10.0
    num_slots: int = 5

    def __post_init__(self):
        if self.num_slots < 2:
            raise ValueError("num_slots must be >= 2 so offloading slots exist")
        for name in ("size_bits", "cycles_per_bit", "capacitance", "f_loc_max",
                     "f_edge_total", "cycle_time"):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"{name} must be positive")

    @property
    def slot_tau(self) -> float:
        return self.cycle_time / self.num_slots

    @property
    def total_cycles(self) -> float:
        return self.size_bits * self.cycles_per_bit


class LocalFreqResult(NamedTuple):
    freq: float
    within_cap: bool


def offload_time(alpha: float, task: TaskSpec, rate: float) -> float:
    """Airtime to push alpha * D bits at the given rate, seconds."""
    if alpha == 0.0:
        return 0.0
    if rate <= 0.0:
        raise InfeasibleOperation("positive offload fraction with zero rate")
    return alpha * task.size_bits / rate


def offload_energy(t_off: float, power: float) -> float:
    """Transmit energy, joules."""
    return t_off * power


def edge_time(task: TaskSpec, eta: float, f_edge: float) -> float:
    """Edge execution time of the offloaded fraction, seconds."""
    if eta == 0.0:
        return 0.0
    if f_edge <= 0.0:
        raise InfeasibleOperation("offloaded work with zero edge frequency")
    return task.total_cycles * eta / f_edge


def local_time_energy(task: TaskSpec, eta: float, f_loc: float) -> tuple[float, float]:
    """Local execution time (s) and energy (J) of the remaining fraction."""
    remaining = 1.0 - eta
    if remaining == 0.0:
        return 0.0, 0.0
    if f_loc <= 0.0:
        raise InfeasibleOperation("local work with zero CPU frequency")
    cycles = task.total_cycles * remaining
    t = cycles / f_loc
    e = task.capacitance * f_loc ** 2 * cycles
    return t, e


def optimal_local_freq(task: TaskSpec, eta: float) -> LocalFreqResult:
    """Energy-optimal local frequency D*C*(1-eta)/T.

    Local energy grows with f, so the slowest frequency that still finishes by
    the cycle deadline is optimal. The result may exceed the hardware cap; the
    flag reports that instead of clamping, because the environment penalizes
    such violations and must observe them.
    """
    if not 0.0 <= eta <= 1.0:
        raise ValueError(f"eta must be in [0, 1], got {eta}")
    freq = task.total_cycles * (1.0 - eta) / task.cycle_time
    return LocalFreqResult(freq=freq, within_cap=freq <= task.f_loc_max)


def optimal_edge_alloc(task: TaskSpec, eta: float) -> float:
    """Edge frequency D*C*eta/((Q-1) tau) finishing inside the last Q-1 slots.

    Over-subscription of the shared edge budget across terminals is the
    caller's concern; each per-terminal value is returned as is.
    """
    return task.total_cycles * eta / ((task.num_slots - 1) * task.slot_tau)


def local_energy_cubic(task: TaskSpec, eta: float) -> float:
    """Local energy at the optimal frequency: c * (DC/T)^2 * DC * (1-eta)^3."""
    base = task.total_cycles / task.cycle_time
    return task.capacitance * base ** 2 * task.total_cycles * (1.0 - eta) ** 3


def local_energy_at_optimum(task: TaskSpec, eta: float) -> float:
    """Energy of local_time_energy evaluated at optimal_local_freq."""
    freq = optimal_local_freq(task, eta).freq
    if freq == 0.0:
        return 0.0
    return local_time_energy(task, eta, freq)[1]
