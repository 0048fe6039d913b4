"""Closed-form decay of the GHZ, W, and WWbar states.

The Lindblad model (per-qubit sigma_x damping at kx_i and sigma_z
dephasing at kz_i, no coherent Hamiltonian) couples a matrix element
<a|rho|b> only to elements with the same index difference d = a XOR b.
Within each sector the solution is a sum of decaying exponentials in the
single-qubit amplitude factors g_i = exp(-kx_i t), dressed by an overall
dephasing factor exp(-sum of kz over the qubits flipped in d). The
functions below write out that solution for the three prepared states.

These expressions double as the oracle for the numerical integrator:
they are exact for arbitrary non-negative rates, not just the bundled
relaxation parameters. Three matrix-element placements here differ from
a published tabulation of the same solution; see CONFORMANCE.md at the
repo root.
"""

from dataclasses import dataclass

import numpy as np

from . import measures

__all__ = ["RateSet", "ghz_analytic", "w_analytic", "wwbar_analytic", "decay_times"]


@dataclass(frozen=True)
class RateSet:
    """Per-qubit damping rates, 1/s. kx = amplitude (1/T1), kz = dephasing (1/T2)."""

    kx: tuple
    kz: tuple

    def __post_init__(self):
        if len(self.kx) != 3 or len(self.kz) != 3:
            raise ValueError("kx and kz must each have three entries")
        if any(r < 0 for r in self.kx) or any(r < 0 for r in self.kz):
            raise ValueError("rates must be non-negative")

    @classmethod
    def from_spins(cls, spins):
        return cls(
            kx=tuple(1.0 / t for t in spins.t1_s),
            kz=tuple(1.0 / t for t in spins.t2_s),
        )


def _bit(a, i):
    # qubit 1 is the most significant bit of the basis index
    return (a >> (3 - i)) & 1


def _sign(a, *qubits):
    return -1.0 if sum(_bit(a, i) for i in qubits) % 2 else 1.0


def _amplitude_factors(t, rates):
    x1, x2, x3 = rates.kx
    g1, g2, g3 = np.exp(-x1 * t), np.exp(-x2 * t), np.exp(-x3 * t)
    return g1, g2, g3


def ghz_analytic(t, rates, sign=-1):
    """GHZ-class state after time t under the damping model.

    Populations sit on the diagonal; the only coherences are on the
    anti-diagonal (the triple-quantum sector). ``sign`` picks the corner
    sign of the initial superposition: -1 (default) matches the state
    the preparation circuit builds, +1 the opposite convention. All
    decay metrics are sign-invariant.
    """
    if t < 0:
        raise ValueError("t must be non-negative")
    if sign not in (-1, 1):
        raise ValueError("sign must be -1 or +1")
    g1, g2, g3 = _amplitude_factors(t, rates)
    g12, g13, g23 = g1 * g2, g1 * g3, g2 * g3
    ez = np.exp(-sum(rates.kz) * t)
    rho = np.zeros((8, 8), dtype=complex)
    for a in range(8):
        bracket = (
            1.0
            + _sign(a, 1, 2) * g12
            + _sign(a, 1, 3) * g13
            + _sign(a, 2, 3) * g23
        )
        rho[a, a] = bracket / 8.0
        rho[a, a ^ 7] = sign * ez * bracket / 8.0
    return rho


def w_analytic(t, rates):
    """W state after time t under the damping model."""
    if t < 0:
        raise ValueError("t must be non-negative")
    z1, z2, z3 = rates.kz
    g1, g2, g3 = _amplitude_factors(t, rates)
    g12, g13, g23 = g1 * g2, g1 * g3, g2 * g3
    g123 = g12 * g3
    rho = np.zeros((8, 8), dtype=complex)
    for a in range(8):
        rho[a, a] = (
            0.125
            + (_sign(a, 1) * g1 + _sign(a, 2) * g2 + _sign(a, 3) * g3) / 24.0
            - (_sign(a, 1, 2) * g12 + _sign(a, 1, 3) * g13 + _sign(a, 2, 3) * g23)
            / 24.0
            - _sign(a, 1, 2, 3) * g123 / 8.0
        )
        # single-quantum sectors are empty for W; the three double-flip
        # sectors carry the initial |100>,|010>,|001> coherences
        rho[a, a ^ 3] = (
            np.exp(-(z2 + z3) * t)
            * (1.0 + _sign(a, 1) * g1)
            * (1.0 - _sign(a, 2, 3) * g23)
            / 12.0
        )
        rho[a, a ^ 5] = (
            np.exp(-(z1 + z3) * t)
            * (1.0 + _sign(a, 2) * g2)
            * (1.0 - _sign(a, 1, 3) * g13)
            / 12.0
        )
        rho[a, a ^ 6] = (
            np.exp(-(z1 + z2) * t)
            * (1.0 - _sign(a, 1, 2) * g12)
            * (1.0 + _sign(a, 3) * g3)
            / 12.0
        )
    return rho


def wwbar_analytic(t, rates):
    """WWbar state (equal superposition of the six middle basis states)
    after time t under the damping model."""
    if t < 0:
        raise ValueError("t must be non-negative")
    z1, z2, z3 = rates.kz
    g1, g2, g3 = _amplitude_factors(t, rates)
    g12, g13, g23 = g1 * g2, g1 * g3, g2 * g3
    rho = np.zeros((8, 8), dtype=complex)
    for a in range(8):
        bracket = (
            0.125
            - (_sign(a, 1, 2) * g12 + _sign(a, 1, 3) * g13 + _sign(a, 2, 3) * g23)
            / 24.0
        )
        rho[a, a] = bracket
        rho[a, a ^ 1] = np.exp(-z3 * t) * (1.0 - _sign(a, 1, 2) * g12) / 12.0
        rho[a, a ^ 2] = np.exp(-z2 * t) * (1.0 - _sign(a, 1, 3) * g13) / 12.0
        rho[a, a ^ 4] = np.exp(-z1 * t) * (1.0 - _sign(a, 2, 3) * g23) / 12.0
        rho[a, a ^ 3] = (
            np.exp(-(z2 + z3) * t) * (1.0 - _sign(a, 2, 3) * g23) / 12.0
        )
        rho[a, a ^ 5] = (
            np.exp(-(z1 + z3) * t) * (1.0 - _sign(a, 1, 3) * g13) / 12.0
        )
        rho[a, a ^ 6] = (
            np.exp(-(z1 + z2) * t) * (1.0 - _sign(a, 1, 2) * g12) / 12.0
        )
        rho[a, a ^ 7] = np.exp(-(z1 + z2 + z3) * t) * bracket
    return rho


_FAMILIES = {"ghz": ghz_analytic, "w": w_analytic, "wwbar": wwbar_analytic}


def decay_times(rates, resolution=1e-3, t_max=2.0):
    """Disentanglement time of each analytic family.

    Bisects the first zero of the tripartite negativity to the given
    resolution (default 1 ms).

    Returns
    -------
    dict
        {"ghz": t, "w": t, "wwbar": t} in seconds.
    """
    out = {}
    for name, family in _FAMILIES.items():
        def alive(t, family=family):
            return measures.tripartite_negativity(family(t, rates)) > 0.0

        if not alive(0.0):
            raise ValueError("%s negativity never positive" % name)
        lo, hi = 0.0, None
        t = resolution
        while t <= t_max:
            if not alive(t):
                hi = t
                break
            lo = t
            t *= 2.0
        if hi is None:
            raise ValueError("%s negativity still positive at %g s" % (name, t_max))
        while hi - lo > resolution:
            mid = 0.5 * (lo + hi)
            if alive(mid):
                lo = mid
            else:
                hi = mid
        out[name] = 0.5 * (lo + hi)
    return out
