"""Evolution of the three-qubit register under damping and dephasing.

Two modes share one fixed-step RK4 engine. Markovian mode integrates the
Lindblad master equation with per-qubit sigma_x damping (rate kappa_x =
1/T1) and sigma_z dephasing (kappa_z = 1/T2). Correlated mode replaces
the dephasing dissipator with per-qubit classical Ornstein-Uhlenbeck
frequency tracks b_i(t) applied through sigma_z/2, averaged over an
ensemble of trajectories; amplitude damping stays Lindbladian. The
system Hamiltonian defaults to zero (on-resonance rotating frame) and
can be switched on for coupled-evolution studies.

The generator is diagonal-plus-permutation in the product basis, so the
right-hand side is evaluated elementwise: a single mask multiply plus
one index gather per damped qubit. The public lindblad_rhs builds the
same derivative from explicit Lindblad operator matrices; tests pin the
two routes against each other.
"""

import math
from dataclasses import dataclass

import numpy as np

from .core import PhysicalityError, check_density, kron, ID2, SX, SZ
from . import measures

__all__ = [
    "SpinSystem",
    "NoiseModel",
    "hamiltonian",
    "lindblad_rhs",
    "evolve_markovian",
    "sample_ou_path",
    "evolve_correlated",
]

_CHUNK = 32  # trajectories integrated per batch; fixed so sums are reproducible


@dataclass(frozen=True)
class SpinSystem:
    """Chemical shifts, scalar couplings, and relaxation times.

    offsets_hz are rotating-frame offsets nu_i - nu_rf. Couplings and
    offsets only matter when the coherent Hamiltonian is switched on;
    decay physics depends on t1_s/t2_s alone.
    """

    offsets_hz: tuple = (0.0, 0.0, 0.0)
    j12_hz: float = 69.65
    j13_hz: float = -128.32
    j23_hz: float = 47.67
    t1_s: tuple = (5.42, 5.65, 4.36)
    t2_s: tuple = (0.53, 0.55, 0.52)

    def __post_init__(self):
        if len(self.offsets_hz) != 3 or len(self.t1_s) != 3 or len(self.t2_s) != 3:
            raise ValueError("offsets_hz, t1_s, t2_s must each have three entries")
        for t1, t2 in zip(self.t1_s, self.t2_s):
            if t1 <= 0:
                raise ValueError("T1 must be positive, got %g" % t1)
            if not 0 < t2 <= 2 * t1:
                raise ValueError("T2 must satisfy 0 < T2 <= 2 T1, got %g" % t2)

    def coupling_hz(self, i, j):
        pair = (min(i, j), max(i, j))
        return {(1, 2): self.j12_hz, (1, 3): self.j13_hz, (2, 3): self.j23_hz}[pair]


@dataclass(frozen=True)
class NoiseModel:
    """Damping rates and bath configuration.

    kappa_x / kappa_z are per-qubit rates in 1/s. bath_mode "markovian"
    uses both as Lindblad dissipators; "correlated" drops the kappa_z
    dissipators in favor of OU dephasing tracks with standard deviation
    ou_sigma (rad/s) and correlation time ou_tau_c (s), averaged over
    `trajectories` runs seeded from `seed`.
    """

    kappa_x: tuple
    kappa_z: tuple
    bath_mode: str = "markovian"
    ou_sigma: float = 0.0
    ou_tau_c: float = 0.0
    trajectories: int = 1
    seed: int = 0

    def __post_init__(self):
        if len(self.kappa_x) != 3 or len(self.kappa_z) != 3:
            raise ValueError("kappa_x and kappa_z must each have three entries")
        if any(k < 0 for k in self.kappa_x) or any(k < 0 for k in self.kappa_z):
            raise ValueError("rates must be non-negative")
        if self.bath_mode not in ("markovian", "correlated"):
            raise ValueError("bath_mode must be markovian or correlated")
        if self.trajectories < 1:
            raise ValueError("trajectories must be >= 1")
        if self.bath_mode == "correlated" and self.ou_tau_c <= 0:
            raise ValueError("ou_tau_c must be positive in correlated mode")

    @classmethod
    def from_spins(cls, spins, **kwargs):
        return cls(
            kappa_x=tuple(1.0 / t for t in spins.t1_s),
            kappa_z=tuple(1.0 / t for t in spins.t2_s),
            **kwargs,
        )


def _half_spin(a, i):
    # I_iz eigenvalue of basis state a: +1/2 for bit 0, -1/2 for bit 1
    return 0.5 if ((a >> (3 - i)) & 1) == 0 else -0.5


def hamiltonian(spins, rf_hz=0.0):
    """Rotating-frame Hamiltonian in rad/s (diagonal 8x8 matrix).

    Zeeman offsets enter as -2*pi*(nu_i - rf) I_iz, couplings as weak
    coupling terms 2*pi*J_ij I_iz I_jz.
    """
    diag = np.zeros(8)
    pairs = [(1, 2), (1, 3), (2, 3)]
    for a in range(8):
        m = [_half_spin(a, i) for i in (1, 2, 3)]
        val = -sum(
            2.0 * math.pi * (spins.offsets_hz[i - 1] - rf_hz) * m[i - 1]
            for i in (1, 2, 3)
        )
        val += sum(
            2.0 * math.pi * spins.coupling_hz(i, j) * m[i - 1] * m[j - 1]
            for i, j in pairs
        )
        diag[a] = val
    return np.diag(diag).astype(complex)


def _embed1(op, qubit):
    factors = [ID2, ID2, ID2]
    factors[qubit - 1] = op
    return kron(kron(factors[0], factors[1]), factors[2])


def lindblad_rhs(rho, spins, noise, with_hamiltonian=False):
    """Right-hand side of the master equation, built from explicit operators.

    d rho/dt = -i[H, rho] + sum_i sum_{a in {x,z}} (L rho L^dag
    - (1/2){L^dag L, rho}) with L_{i,x} = sqrt(kappa_x/2) sigma_x^(i)
    and L_{i,z} = sqrt(kappa_z/2) sigma_z^(i). Traceless and Hermitian
    output. H defaults to zero; pass with_hamiltonian=True to include
    the spin Hamiltonian.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (8, 8):
        raise ValueError("expected an 8x8 density matrix, got %r" % (rho.shape,))
    out = np.zeros((8, 8), dtype=complex)
    if with_hamiltonian:
        h = hamiltonian(spins)
        out += -1j * (h @ rho - rho @ h)
    for i in (1, 2, 3):
        for op, rate in ((SX, noise.kappa_x[i - 1]), (SZ, noise.kappa_z[i - 1])):
            if rate == 0.0:
                continue
            l = math.sqrt(rate / 2.0) * _embed1(op, i)
            ll = l.conj().T @ l
            out += l @ rho @ l.conj().T - 0.5 * (ll @ rho + rho @ ll)
    return out


#
# Fast elementwise generator. For this model the derivative decomposes as
#   drho = E * rho + sum_i (kappa_x_i / 2) * rho[flip_i rows, flip_i cols]
# with E collecting the -i[H, .] phase (H is diagonal), the dephasing
# mask, and the damping decay constant. The OU bath adds a per-step,
# per-trajectory imaginary phase to E through the same mask arrays.
#

_FLIP = [np.arange(8) ^ (1 << (3 - i)) for i in (1, 2, 3)]
_PERM = [(p[:, None], p[None, :]) for p in _FLIP]
# (m_i^a - m_i^b) per qubit, entries in {-1, 0, +1}
_ZDIFF = np.stack(
    [
        np.array(
            [[_half_spin(a, i) - _half_spin(b, i) for b in range(8)] for a in range(8)]
        )
        for i in (1, 2, 3)
    ]
)


def _base_elementwise(spins, noise, with_hamiltonian, drop_kz):
    e = np.zeros((8, 8), dtype=complex)
    if with_hamiltonian:
        h = np.diag(hamiltonian(spins)).real
        e += -1j * (h[:, None] - h[None, :])
    if not drop_kz:
        for i in (1, 2, 3):
            kz = noise.kappa_z[i - 1]
            zd = _ZDIFF[i - 1]
            # (sigma_z rho sigma_z - rho) elementwise: -2 where the bit
            # differs between row and column, 0 where it matches
            e += (kz / 2.0) * (np.where(zd != 0.0, -2.0, 0.0))
    e -= 0.5 * sum(noise.kappa_x)
    return e


def _rhs_fast(rho, e, kappa_x):
    out = e * rho
    for (pi, pj), kx in zip(_PERM, kappa_x):
        if kx != 0.0:
            out = out + (0.5 * kx) * rho[..., pi, pj]
    return out


def _rk4_step(rho, dt, e, kappa_x):
    k1 = _rhs_fast(rho, e, kappa_x)
    k2 = _rhs_fast(rho + (0.5 * dt) * k1, e, kappa_x)
    k3 = _rhs_fast(rho + (0.5 * dt) * k2, e, kappa_x)
    k4 = _rhs_fast(rho + dt * k3, e, kappa_x)
    return rho + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _default_dt(spins, min_delay=None):
    dt = min(spins.t2_s) / 2000.0
    if min_delay is not None:
        # pulses must be resolved well below the inter-pulse delay
        dt = min(dt, min_delay / 50.0)
    return dt


def _plan_steps(t_final, dt):
    if t_final < 0:
        raise ValueError("t_final must be non-negative")
    if t_final == 0.0:
        return 0, dt
    n = max(1, int(round(t_final / dt)))
    return n, t_final / n


def _apply_unitary(states, u):
    return np.matmul(u, np.matmul(states, u.conj().T))


def _validate_sample(rho, t):
    try:
        check_density(rho)
    except PhysicalityError as err:
        raise PhysicalityError("at t = %.9g s: %s" % (t, err)) from err


def evolve_markovian(rho0, spins, noise, t_final, dt=None,
                     sample_every=1, with_hamiltonian=False):
    """Integrate the Lindblad master equation with fixed-step RK4.

    Samples every ``sample_every`` steps (plus t = 0 and t_final).
    Every sampled matrix is re-validated as physical; a violation
    raises PhysicalityError naming the first offending time. dt
    defaults to min(T2)/2000 and is rounded so an integer number of
    steps lands exactly on t_final.

    Returns
    -------
    measures.DecayCurve
        Metrics against rho0 as the fidelity reference, with the
        sampled density matrices attached.
    """
    rho0 = check_density(rho0)
    if dt is None:
        dt = _default_dt(spins)
    if dt <= 0:
        raise ValueError("dt must be positive")
    n, dt = _plan_steps(t_final, dt)
    e = _base_elementwise(spins, noise, with_hamiltonian, drop_kz=False)
    kx = noise.kappa_x
    times, states = [0.0], [rho0.copy()]
    rho = rho0.astype(complex)
    for k in range(1, n + 1):
        rho = _rk4_step(rho, dt, e, kx)
        if k % sample_every == 0 or k == n:
            t = k * dt
            _validate_sample(rho, t)
            times.append(t)
            states.append(rho.copy())
    return measures.curve_from_states(times, states, rho0)


def _ou_paths(rng, tau_c, sigma, dt, n_steps, width):
    """Stationary OU tracks, one column per qubit: (n_steps, width).

    Exact discrete update x' = x e^{-dt/tau_c} + sigma
    sqrt(1 - e^{-2 dt/tau_c}) xi with a stationary N(0, sigma^2) start.
    """
    if sigma == 0.0 or n_steps == 0:
        return np.zeros((n_steps, width))
    eps = rng.standard_normal((n_steps, width))
    d = math.exp(-dt / tau_c)
    sn = sigma * math.sqrt(1.0 - d * d)
    out = np.empty((n_steps, width))
    out[0] = sigma * eps[0]
    # blockwise scan; the closed form within a block uses growing powers
    # of 1/d, so block length is capped to keep them finite
    max_block = max(1, int(500.0 / max(dt / tau_c, 1e-12)))
    k = 1
    while k < n_steps:
        stop = min(n_steps, k + max_block)
        m = stop - k
        powers = d ** np.arange(1, m + 1)          # d^1 .. d^m
        inv = (1.0 / d) ** np.arange(1, m + 1)      # d^-1 .. d^-m
        acc = np.cumsum(inv[:, None] * eps[k:stop], axis=0)
        out[k:stop] = powers[:, None] * (out[k - 1] + sn * acc)
        k = stop
    return out


def sample_ou_path(tau_c, sigma, dt, n_steps, seed):
    """One stationary Ornstein-Uhlenbeck track of length n_steps.

    Mean 0, variance sigma^2, autocorrelation exp(-lag/tau_c);
    deterministic per seed.
    """
    if tau_c <= 0 or dt <= 0 or n_steps < 1 or sigma < 0:
        raise ValueError("tau_c, dt, n_steps must be positive and sigma >= 0")
    rng = np.random.default_rng(np.random.SeedSequence(entropy=int(seed)))
    return _ou_paths(rng, tau_c, sigma, dt, n_steps, 1)[:, 0]


def _expand_pulse_steps(pulses, dt, n):
    """Snap (time, unitary) pulse events to step boundaries."""
    by_step = {}
    for t, u in pulses:
        k = int(round(t / dt))
        if k < 0 or k > n:
            raise ValueError("pulse at t = %g s falls outside the run" % t)
        by_step.setdefault(k, []).append(u)
    return by_step


def evolve_correlated(rho0, spins, noise, schedule, t_final, dt=None,
                      sample_every=None, with_hamiltonian=False):
    """Ensemble-averaged evolution under the correlated dephasing bath.

    Each trajectory evolves under the spin Hamiltonian (optional) plus
    per-qubit OU frequency tracks b_i(t) sigma_z^(i)/2, with amplitude
    damping still applied as a Lindblad dissipator. The kappa_z
    dissipators are off in this mode; the OU bath is the dephasing.
    Pulses from ``schedule`` (a ddseq.DDSchedule, or None) are applied
    as instantaneous unitaries snapped to step boundaries. Trajectory
    j draws from a stream seeded by (noise.seed, j), so the ensemble
    mean does not depend on execution order.
    """
    rho0 = check_density(rho0)
    if noise.bath_mode != "correlated":
        raise ValueError("evolve_correlated requires bath_mode = correlated")
    pulses = []
    min_delay = None
    if schedule is not None:
        # deferred import: ddseq imports this module at load time
        from .ddseq import expand_schedule, cycle_duration, min_interpulse_delay

        total = schedule.cycles * cycle_duration(schedule)
        if total > t_final * (1 + 1e-9) + 1e-15:
            raise ValueError(
                "schedule spans %g s, beyond t_final = %g s" % (total, t_final)
            )
        pulses = expand_schedule(schedule)
        min_delay = min_interpulse_delay(schedule)
    if dt is None:
        dt = _default_dt(spins, min_delay)
    n, dt = _plan_steps(t_final, dt)
    if sample_every is None:
        sample_every = max(1, n // 200) if n else 1
    sample_steps = sorted(set([0] + list(range(sample_every, n + 1, sample_every)) + [n]))
    pulses_by_step = _expand_pulse_steps(pulses, dt, n)

    e = _base_elementwise(spins, noise, with_hamiltonian, drop_kz=True)
    kx = noise.kappa_x
    tau_c, sigma = noise.ou_tau_c, noise.ou_sigma
    n_traj = noise.trajectories
    acc = {k: np.zeros((8, 8), dtype=complex) for k in sample_steps}

    for start in range(0, n_traj, _CHUNK):
        idx = range(start, min(start + _CHUNK, n_traj))
        tracks = []
        for j in idx:
            rng = np.random.default_rng(
                np.random.SeedSequence(entropy=(int(noise.seed), int(j)))
            )
            tracks.append(_ou_paths(rng, tau_c, sigma, dt, max(n, 1), 3))
        b = np.stack(tracks)  # (chunk, n, 3)
        states = np.broadcast_to(rho0, (len(tracks), 8, 8)).astype(complex).copy()
        for u in pulses_by_step.get(0, []):
            states = _apply_unitary(states, u)
        if 0 in acc:
            acc[0] += states.sum(axis=0)
        for k in range(1, n + 1):
            phase = -1j * np.einsum("ci,iab->cab", b[:, k - 1, :], _ZDIFF)
            states = _rk4_step(states, dt, e + phase, kx)
            for u in pulses_by_step.get(k, []):
                states = _apply_unitary(states, u)
            if k in acc:
                acc[k] += states.sum(axis=0)

    times = [k * dt for k in sample_steps]
    means = []
    for k, t in zip(sample_steps, times):
        rho = acc[k] / n_traj
        _validate_sample(rho, t)
        means.append(rho)
    return measures.curve_from_states(times, means, rho0)


def _run_pulsed_markovian(rho0, spins, noise, t_final, dt, pulses,
                          sample_steps_hint=None, with_hamiltonian=False):
    """Markovian integration with instantaneous pulses; used by ddseq.

    pulses: list of (time_s, unitary). Samples at sample_steps_hint
    (step indices) when given, else every step. Returns (times, states).
    """
    rho0 = check_density(rho0)
    n, dt = _plan_steps(t_final, dt)
    e = _base_elementwise(spins, noise, with_hamiltonian, drop_kz=False)
    kx = noise.kappa_x
    pulses_by_step = _expand_pulse_steps(pulses, dt, n)
    marks = set(sample_steps_hint) if sample_steps_hint is not None else set(range(n + 1))
    trivial = (
        not with_hamiltonian
        and all(k == 0.0 for k in noise.kappa_x)
        and all(k == 0.0 for k in noise.kappa_z)
    )
    rho = rho0.astype(complex)
    times, states = [], []
    for u in pulses_by_step.get(0, []):
        rho = _apply_unitary(rho, u)
    if 0 in marks:
        times.append(0.0)
        states.append(rho.copy())
    if trivial:
        # zero generator: free segments are identities, only pulses act
        for k in sorted(set(pulses_by_step) | marks):
            if k == 0:
                continue
            for u in pulses_by_step.get(k, []):
                rho = _apply_unitary(rho, u)
            if k in marks:
                times.append(k * dt)
                states.append(rho.copy())
        return times, states
    for k in range(1, n + 1):
        rho = _rk4_step(rho, dt, e, kx)
        for u in pulses_by_step.get(k, []):
            rho = _apply_unitary(rho, u)
        if k in marks:
            t = k * dt
            _validate_sample(rho, t)
            times.append(t)
            states.append(rho.copy())
    return times, states
