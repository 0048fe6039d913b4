import math

import numpy as np
import pytest

from triq import (
    DDSchedule,
    NoiseModel,
    Pulse,
    build_cpmg,
    build_kddxy,
    build_xy16s,
    cycle_duration,
    evolve_markovian,
    expand_schedule,
    min_interpulse_delay,
    prepare_ghz,
    pulse_unitary,
    run_protected,
    schedule_table,
)
from triq.core import SX

TAU = 0.25e-3
QUIET = NoiseModel(kappa_x=(0.0, 0.0, 0.0), kappa_z=(0.0, 0.0, 0.0))


def test_pulse_validation():
    p = Pulse()
    assert p.angle == math.pi and p.phase == 0.0 and p.targets == (1, 2, 3)
    with pytest.raises(ValueError, match="angle"):
        Pulse(angle=0.0)
    with pytest.raises(ValueError, match="angle"):
        Pulse(angle=2.1 * math.pi)


def test_schedule_validation():
    ev = ((1e-3, Pulse()),)
    with pytest.raises(ValueError, match="cycles"):
        DDSchedule(events=ev, cycles=0)
    with pytest.raises(ValueError, match="at least one event"):
        DDSchedule(events=())
    with pytest.raises(ValueError, match="positive"):
        DDSchedule(events=((0.0, Pulse()),))


def test_xy16s_structure():
    sch = build_xy16s(TAU)
    assert len(sch.pulses) == 16
    assert cycle_duration(sch) == pytest.approx(16 * TAU, rel=1e-15)
    delays = [d for d, _ in sch.events]
    assert delays[0] == delays[-1] == TAU / 2.0
    assert all(d == TAU for d in delays[1:-1])
    assert sch.events[-1][1] is None
    x, y = 0.0, math.pi / 2.0
    phases = [p.phase for p in sch.pulses]
    assert phases[:8] == [x, y, x, y, y, x, y, x]
    # second half swaps the axes of the first
    assert phases[8:] == [y, x, y, x, x, y, x, y]
    assert min_interpulse_delay(sch) == pytest.approx(TAU, rel=1e-15)


def test_kddxy_structure():
    sch = build_kddxy(TAU)
    assert len(sch.pulses) == 20
    assert cycle_duration(sch) == pytest.approx(20 * TAU, rel=1e-15)
    phases = [p.phase for p in sch.pulses]
    block = [math.pi / 6.0, 0.0, math.pi / 2.0, 0.0, math.pi / 6.0]
    shifted = [p + math.pi / 2.0 for p in block]
    assert phases == block + shifted + block + shifted
    assert min_interpulse_delay(sch) == pytest.approx(TAU, rel=1e-15)


def test_cpmg_structure():
    sch = build_cpmg(TAU)
    assert len(sch.pulses) == 16
    assert all(p.phase == math.pi / 2.0 for p in sch.pulses)
    assert [d for d, _ in sch.events] == [d for d, _ in build_xy16s(TAU).events]


def test_builders_reject_bad_tau():
    for build in (build_xy16s, build_kddxy, build_cpmg):
        with pytest.raises(ValueError, match="tau"):
            build(0.0)


def test_pulse_unitary_collective_x():
    u = pulse_unitary(Pulse(phase=0.0))
    xxx = np.kron(np.kron(SX, SX), SX)
    # each pi_x factor is -i X, so the collective pulse is +i XXX
    assert np.allclose(u, 1j * xxx, atol=1e-14)
    assert np.allclose(u @ u.conj().T, np.eye(8), atol=1e-14)


def test_pulse_unitary_targets_and_flip_error():
    u = pulse_unitary(Pulse(targets=(2,)))
    assert np.allclose(u, np.kron(np.kron(np.eye(2), -1j * SX), np.eye(2)),
                       atol=1e-14)
    over = pulse_unitary(Pulse(flip_error=0.01))
    assert not np.allclose(over, pulse_unitary(Pulse()), atol=1e-4)
    assert np.allclose(over @ over.conj().T, np.eye(8), atol=1e-13)


def test_expand_schedule_absolute_times():
    sch = build_xy16s(TAU, cycles=2)
    events = expand_schedule(sch)
    assert len(events) == 32
    assert events[0][0] == pytest.approx(TAU / 2.0, rel=1e-15)
    assert events[16][0] == pytest.approx(16 * TAU + TAU / 2.0, rel=1e-15)
    assert events[-1][0] == pytest.approx(32 * TAU - TAU / 2.0, rel=1e-15)


def test_min_interpulse_delay_wraps_across_cycles():
    sch = DDSchedule(events=((0.1, Pulse()), (1.0, Pulse()), (0.05, None)))
    # gaps: 1.0 inside the cycle, 0.15 wrapping into the next cycle
    assert min_interpulse_delay(sch) == pytest.approx(0.15, rel=1e-12)
    bare = DDSchedule(events=((0.4, None),))
    assert min_interpulse_delay(bare) == pytest.approx(0.4)


def test_schedule_table_frozen_rows():
    lines = schedule_table(build_xy16s(TAU)).splitlines()
    assert lines[0] == "event,time_offset_s,phase_rad,angle_rad"
    assert len(lines) == 17
    assert lines[1] == "0,0.000125,0,3.14159265359"
    assert lines[8] == "7,0.001875,0,3.14159265359"
    assert lines[16] == "15,0.003875,1.57079632679,3.14159265359"
    klines = schedule_table(build_kddxy(TAU)).splitlines()
    assert len(klines) == 21
    assert klines[1] == "0,0.000125,0.523598775598,3.14159265359"
    assert klines[3] == "2,0.000625,1.57079632679,3.14159265359"
    assert schedule_table(build_xy16s(TAU)).endswith("\n")


def test_cycles_compose_to_identity_without_noise(spins):
    # ideal pulses, no decoherence: the state returns exactly at every
    # cycle boundary for all three bundled sequences
    rho = prepare_ghz()
    for build in (build_xy16s, build_kddxy, build_cpmg):
        sch = build(TAU, cycles=3)
        curve = run_protected(rho, spins, QUIET, sch,
                              3 * cycle_duration(sch), dt=TAU / 2.0)
        assert float(np.min(curve.fidelity)) > 1.0 - 1e-9


def test_flip_error_robustness_ordering(spins):
    # 1% systematic over-rotation, no decoherence, 100 cycles: the
    # composite-pulse sequence beats XY-16(s), which beats the
    # single-axis control by orders of magnitude
    rho = prepare_ghz()
    mins = {}
    argmins = {}
    for name, build in (("cpmg", build_cpmg), ("xy16s", build_xy16s),
                        ("kddxy", build_kddxy)):
        sch = build(TAU, cycles=100, flip_error=0.01)
        curve = run_protected(rho, spins, QUIET, sch,
                              100 * cycle_duration(sch), dt=TAU / 2.0)
        mins[name] = float(np.min(curve.fidelity))
        argmins[name] = int(np.argmin(curve.fidelity))
    assert mins["kddxy"] >= mins["xy16s"] >= mins["cpmg"]
    assert mins["kddxy"] > 0.9999999
    assert mins["xy16s"] == pytest.approx(0.999942347, abs=1e-6)
    # the single-axis control walks GHZ through a collective rotation
    # that bottoms out near half a turn, six cycles in
    assert mins["cpmg"] < 0.01
    assert argmins["cpmg"] == 6


def test_markovian_noise_is_transparent_to_decoupling(spins):
    # the damping dissipators are invariant under pi-pulse conjugation,
    # so decoupling neither helps nor hurts a memoryless bath
    nm = NoiseModel.from_spins(spins)
    sch = build_xy16s(TAU, cycles=25)
    total = 25 * cycle_duration(sch)
    prot = run_protected(prepare_ghz(), spins, nm, sch, total)
    free = evolve_markovian(prepare_ghz(), spins, nm, total, dt=2.5e-5,
                            sample_every=10**9)
    assert prot.times[-1] == pytest.approx(free.times[-1], rel=1e-12)
    assert prot.n3_tri[-1] == pytest.approx(free.n3_tri[-1], rel=1e-6)
    assert prot.fidelity[-1] == pytest.approx(free.fidelity[-1], rel=1e-6)


def test_run_protected_sampling_grid(spins):
    sch = build_xy16s(1e-3, cycles=1)
    curve = run_protected(prepare_ghz(), spins, NoiseModel.from_spins(spins),
                          sch, 0.048, dt=5e-4)
    assert np.allclose(curve.times, [0.0, 0.016, 0.032, 0.048], atol=1e-12)


def test_run_protected_validates_total_time(spins):
    sch = build_xy16s(1e-3)
    nm = NoiseModel.from_spins(spins)
    with pytest.raises(ValueError, match="shorter than one cycle"):
        run_protected(prepare_ghz(), spins, nm, sch, 0.008)
    with pytest.raises(ValueError, match="integer number"):
        run_protected(prepare_ghz(), spins, nm, sch, 0.024)
