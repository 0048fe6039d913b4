"""Dynamical-decoupling schedules and their execution.

A schedule is one cycle of (delay, pulse) events repeated N times.
Pulses are instantaneous pi rotations applied simultaneously on all
three qubits; a trailing event may carry no pulse so the cycle can end
on a half delay. Both bundled sequences compose to the identity on a
closed system:

XY-16(s): base block x y x y, its time-reversed extension, then the
axis-swapped copy of those eight; delays are tau/2 at the cycle edges
and tau between pulses, so reversing the delay list reproduces it and
reversing the phase list equals swapping x and y.

KDD_xy: the five-pulse composite block at phases (pi/6 + phi, phi,
pi/2 + phi, phi, pi/6 + phi), alternated between phi = 0 and
phi = pi/2 and repeated twice, twenty pulses at uniform spacing.

A single-axis CPMG-style control with the XY-16 timing is included as
the robustness baseline: it cancels nothing when every pulse carries
the same systematic flip error.
"""

import math
from dataclasses import dataclass, replace

import numpy as np

from . import measures, noise, states

__all__ = [
    "Pulse",
    "DDSchedule",
    "build_xy16s",
    "build_kddxy",
    "build_cpmg",
    "cycle_duration",
    "min_interpulse_delay",
    "pulse_unitary",
    "expand_schedule",
    "schedule_table",
    "run_protected",
]


@dataclass(frozen=True)
class Pulse:
    """One instantaneous collective rotation.

    flip_error is the fractional over-rotation: the applied angle is
    angle * (1 + flip_error).
    """

    angle: float = math.pi
    phase: float = 0.0
    targets: tuple = (1, 2, 3)
    flip_error: float = 0.0

    def __post_init__(self):
        if not 0.0 < self.angle <= 2.0 * math.pi:
            raise ValueError("angle must lie in (0, 2 pi], got %g" % self.angle)


@dataclass(frozen=True)
class DDSchedule:
    """One cycle of (delay_s, Pulse-or-None) events, repeated ``cycles`` times."""

    events: tuple
    cycles: int = 1

    def __post_init__(self):
        if self.cycles < 1:
            raise ValueError("cycles must be >= 1")
        if not self.events:
            raise ValueError("schedule needs at least one event")
        for delay, _ in self.events:
            if delay <= 0:
                raise ValueError("delays must be positive, got %g" % delay)

    @property
    def pulses(self):
        return [p for _, p in self.events if p is not None]


def _edge_delayed(phases, tau, flip_error):
    events = [(tau / 2.0, Pulse(phase=phases[0], flip_error=flip_error))]
    for ph in phases[1:]:
        events.append((tau, Pulse(phase=ph, flip_error=flip_error)))
    events.append((tau / 2.0, None))
    return tuple(events)


_XY4 = (0.0, math.pi / 2.0, 0.0, math.pi / 2.0)


def _swap_xy(phases):
    return tuple(math.pi / 2.0 - p for p in phases)


def build_xy16s(tau, cycles=1, flip_error=0.0):
    """Symmetric XY-16 cycle: sixteen pi pulses over a 16 tau cycle."""
    if tau <= 0:
        raise ValueError("tau must be positive")
    xy8s = _XY4 + tuple(reversed(_XY4))
    phases = xy8s + _swap_xy(xy8s)
    return DDSchedule(events=_edge_delayed(phases, tau, flip_error), cycles=cycles)


def build_kddxy(tau_k, cycles=1, flip_error=0.0):
    """KDD_xy cycle: twenty pi pulses over a 20 tau_k cycle."""
    if tau_k <= 0:
        raise ValueError("tau_k must be positive")

    def kdd(phi):
        return (math.pi / 6.0 + phi, phi, math.pi / 2.0 + phi, phi,
                math.pi / 6.0 + phi)

    phases = (kdd(0.0) + kdd(math.pi / 2.0)) * 2
    return DDSchedule(events=_edge_delayed(phases, tau_k, flip_error),
                      cycles=cycles)


def build_cpmg(tau, cycles=1, flip_error=0.0):
    """Single-axis control: sixteen y pulses with the XY-16 timing."""
    if tau <= 0:
        raise ValueError("tau must be positive")
    phases = (math.pi / 2.0,) * 16
    return DDSchedule(events=_edge_delayed(phases, tau, flip_error), cycles=cycles)


def cycle_duration(schedule):
    """Duration of one cycle in seconds (pulses take zero time)."""
    return float(sum(delay for delay, _ in schedule.events))


def min_interpulse_delay(schedule):
    """Smallest gap between consecutive pulses, wrapping across cycles."""
    offsets = []
    t = 0.0
    for delay, pulse in schedule.events:
        t += delay
        if pulse is not None:
            offsets.append(t)
    if not offsets:
        return cycle_duration(schedule)
    cyc = cycle_duration(schedule)
    gaps = [b - a for a, b in zip(offsets, offsets[1:])]
    gaps.append(cyc - offsets[-1] + offsets[0])
    return min(gaps)


def pulse_unitary(pulse):
    """8x8 unitary of one collective pulse, flip error included."""
    angle = pulse.angle * (1.0 + pulse.flip_error)
    u = np.eye(8, dtype=complex)
    for q in pulse.targets:
        u = states.rotation(q, angle, pulse.phase).unitary @ u
    return u


def expand_schedule(schedule):
    """Absolute (time_s, unitary) pairs across all cycles."""
    cyc = cycle_duration(schedule)
    out = []
    for c in range(schedule.cycles):
        t = c * cyc
        for delay, pulse in schedule.events:
            t += delay
            if pulse is not None:
                out.append((t, pulse_unitary(pulse)))
    return out


def schedule_table(schedule):
    """Text table of one cycle: event index, time offset, phase, angle.

    One row per pulse; trailing pulse-free delays contribute only to
    the offsets. Stable format for golden-file comparisons.
    """
    lines = ["event,time_offset_s,phase_rad,angle_rad"]
    t = 0.0
    k = 0
    for delay, pulse in schedule.events:
        t += delay
        if pulse is None:
            continue
        lines.append("%d,%.12g,%.12g,%.12g" % (k, t, pulse.phase, pulse.angle))
        k += 1
    return "\n".join(lines) + "\n"


def run_protected(rho0, spins, noise_model, schedule, total_time,
                  dt=None, with_hamiltonian=False):
    """Repeat the DD cycle until total_time, sampling after each cycle.

    total_time must be an integer number of cycle durations. Free
    evolution between pulses follows the noise model's bath mode;
    pulses are applied as instantaneous collective unitaries with
    their flip errors.
    """
    cyc = cycle_duration(schedule)
    if total_time < cyc - 1e-12:
        raise ValueError("total_time %g s is shorter than one cycle %g s"
                         % (total_time, cyc))
    n_cycles = int(round(total_time / cyc))
    if abs(n_cycles * cyc - total_time) > 1e-9 * max(1.0, total_time):
        raise ValueError(
            "total_time %g s is not an integer number of %g s cycles"
            % (total_time, cyc)
        )
    full = replace(schedule, cycles=n_cycles)
    if dt is None:
        dt = noise._default_dt(spins, min_interpulse_delay(schedule))
    # land cycle boundaries exactly on steps
    steps_per_cycle = max(1, int(math.ceil(cyc / dt - 1e-12)))
    dt = cyc / steps_per_cycle
    marks = [c * steps_per_cycle for c in range(n_cycles + 1)]

    if noise_model.bath_mode == "correlated":
        return noise.evolve_correlated(
            rho0, spins, noise_model, full, n_cycles * cyc, dt=dt,
            sample_every=steps_per_cycle, with_hamiltonian=with_hamiltonian,
        )
    times, sampled = noise._run_pulsed_markovian(
        rho0, spins, noise_model, n_cycles * cyc, dt,
        expand_schedule(full), sample_steps_hint=marks,
        with_hamiltonian=with_hamiltonian,
    )
    return measures.curve_from_states(times, sampled, rho0)
