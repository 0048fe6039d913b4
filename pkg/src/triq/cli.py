"""Experiment runner: decay sweeps, DD protection, calibration, tomography.

Subcommands
-----------
decay          Markovian decay sweep of one state; CSV + SVG + the
               closed-form overlay curve on the same grid.
protect        Paired protected/unprotected runs under the correlated
               bath; protected CSV carries a protection_factor column.
calibrate      Bisect the OU sigma so the unprotected single-qubit
               coherence 1/e time matches the configured T2.
tomo           Seven-setting readout simulation (or records-file
               replay) plus maximum-likelihood reconstruction.
schedule-dump  Pulse table of the configured DD sequence.

Configuration is a flat text file of ``dotted.key = value`` lines
(``#`` starts a comment). Unknown keys, malformed values, and duplicate
keys are rejected with line numbers. Environment variables override the
file: ``TRIQ_<KEY>`` with the dots spelled as double underscores
(``TRIQ_BATH__TRAJECTORIES=64`` sets ``bath.trajectories``). The
``--seed`` and ``--out`` flags override both. There is no default seed:
any run that draws random numbers without a configured seed is a
config error.

CSV schema: ``time_s,N1,N2,N3,N3_tri,fidelity,purity`` plus a final
``protection_factor`` column on protected curves, 12 significant
digits. Exit codes: 0 ok, 2 config error, 3 numerical failure.
"""

import argparse
import math
import os
import sys

import numpy as np

from .analytic import RateSet, ghz_analytic, w_analytic, wwbar_analytic
from .core import PhysicalityError, save_matrix
from .ddseq import build_kddxy, build_xy16s, cycle_duration, min_interpulse_delay, run_protected, schedule_table
from .measures import curve_from_states
from .noise import NoiseModel, SpinSystem, evolve_correlated, evolve_markovian
from .states import prepare_ghz, prepare_w, prepare_wwbar
from .tomo import fidelity_report, mle_reconstruct, read_records, tomograph, write_records

__all__ = ["ConfigError", "load_config", "main"]


class ConfigError(ValueError):
    """Configuration rejected; the message names the key or line."""


def _parse_float(text):
    try:
        v = float(text)
    except ValueError:
        raise ConfigError("not a number: %r" % text)
    if not math.isfinite(v):
        raise ConfigError("value must be finite, got %r" % text)
    return v


def _parse_triple(text):
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 3:
        raise ConfigError("expected three comma-separated numbers, got %r" % text)
    return tuple(_parse_float(p) for p in parts)


def _parse_int(text):
    try:
        return int(text, 10)
    except ValueError:
        raise ConfigError("not an integer: %r" % text)


def _parse_seed(text):
    v = _parse_int(text)
    if not 0 <= v < 2**64:
        raise ConfigError("seed must be a 64-bit unsigned integer, got %d" % v)
    return v


def _enum(*choices):
    def parse(text):
        if text not in choices:
            raise ConfigError("expected one of %s, got %r" % ("/".join(choices), text))
        return text
    return parse


def _positive(v):
    if v <= 0:
        raise ConfigError("must be positive, got %g" % v)
    return v


def _non_negative(v):
    if v < 0:
        raise ConfigError("must be non-negative, got %g" % v)
    return v


def _identity(v):
    return v


# key -> (value parser, constraint, default); seed has no default on purpose
_SCHEMA = {
    "state": (_enum("ghz", "w", "wwbar"), _identity, "ghz"),
    "spins.offsets_hz": (_parse_triple, _identity, (0.0, 0.0, 0.0)),
    "spins.j12_hz": (_parse_float, _identity, 69.65),
    "spins.j13_hz": (_parse_float, _identity, -128.32),
    "spins.j23_hz": (_parse_float, _identity, 47.67),
    "spins.t1_s": (_parse_triple, _identity, (5.42, 5.65, 4.36)),
    "spins.t2_s": (_parse_triple, _identity, (0.53, 0.55, 0.52)),
    "bath.mode": (_enum("markovian", "correlated"), _identity, "markovian"),
    "bath.sigma_rad_s": (_parse_float, _non_negative, 0.0),
    "bath.tau_c_s": (_parse_float, _non_negative, 0.01),
    "bath.trajectories": (_parse_int, lambda v: _positive(v) and v, 256),
    "dd.sequence": (_enum("none", "xy16s", "kddxy"), _identity, "none"),
    "dd.tau_s": (_parse_float, _positive, 0.25e-3),
    "dd.cycles": (_parse_int, lambda v: _positive(v) and v, 1),
    "dd.flip_error": (_parse_float, _identity, 0.0),
    "grid.t_final_s": (_parse_float, _non_negative, 1.0),
    "grid.step_s": (_parse_float, _positive, 0.005),
    "tomo.noise_sigma": (_parse_float, _non_negative, 0.0),
    "tomo.records": (str, _identity, ""),
    "calibrate.sigma_lo_rad_s": (_parse_float, _positive, 1.0),
    "calibrate.sigma_hi_rad_s": (_parse_float, _positive, 60.0),
    "out.dir": (str, _identity, "."),
    "seed": (_parse_seed, _identity, None),
}


def _defaults():
    cfg = {k: d for k, (_, _, d) in _SCHEMA.items() if d is not None}
    return cfg


def _set_key(cfg, key, raw, where):
    if key not in _SCHEMA:
        raise ConfigError("%s: unknown key %r" % (where, key))
    parse, constrain, _ = _SCHEMA[key]
    try:
        val = parse(raw.strip() if isinstance(raw, str) else raw)
        constrain(val)
    except ConfigError as err:
        raise ConfigError("%s: %s: %s" % (where, key, err))
    cfg[key] = val


def parse_config(text, name="<config>"):
    """Parse config text onto the defaults; strict and line-diagnosed."""
    cfg = _defaults()
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError("%s:%d: expected key = value" % (name, lineno))
        key, _, value = line.partition("=")
        key = key.strip()
        if key in seen:
            raise ConfigError("%s:%d: duplicate key %r" % (name, lineno, key))
        seen.add(key)
        _set_key(cfg, key, value, "%s:%d" % (name, lineno))
    return cfg


def _apply_env(cfg, environ):
    for name in sorted(environ):
        if not name.startswith("TRIQ_"):
            continue
        key = name[len("TRIQ_"):].lower().replace("__", ".")
        _set_key(cfg, key, environ[name], "environment %s" % name)


def load_config(path=None, environ=None, seed=None, out_dir=None):
    """Defaults, then config file, then TRIQ_ environment, then flags."""
    if path is not None:
        try:
            with open(path) as f:
                text = f.read()
        except OSError as err:
            raise ConfigError("cannot read config %s: %s" % (path, err))
        cfg = parse_config(text, name=path)
    else:
        cfg = _defaults()
    _apply_env(cfg, environ if environ is not None else os.environ)
    if seed is not None:
        cfg["seed"] = _parse_seed(str(seed))
    if out_dir is not None:
        cfg["out.dir"] = out_dir
    return cfg


def _require_seed(cfg, why):
    if "seed" not in cfg:
        raise ConfigError("seed required: %s draws random numbers" % why)
    return cfg["seed"]


def _spins(cfg):
    try:
        return SpinSystem(
            offsets_hz=cfg["spins.offsets_hz"],
            j12_hz=cfg["spins.j12_hz"],
            j13_hz=cfg["spins.j13_hz"],
            j23_hz=cfg["spins.j23_hz"],
            t1_s=cfg["spins.t1_s"],
            t2_s=cfg["spins.t2_s"],
        )
    except ValueError as err:
        raise ConfigError("spins: %s" % err)


_PREPARE = {"ghz": prepare_ghz, "w": prepare_w, "wwbar": prepare_wwbar}
_ANALYTIC = {"ghz": ghz_analytic, "w": w_analytic, "wwbar": wwbar_analytic}
_BUILDERS = {"xy16s": build_xy16s, "kddxy": build_kddxy}

_CSV_HEADER = "time_s,N1,N2,N3,N3_tri,fidelity,purity"


def _check_ranges(curve):
    eps = 1e-9
    cols = (("N1", curve.n1), ("N2", curve.n2), ("N3", curve.n3),
            ("N3_tri", curve.n3_tri), ("fidelity", curve.fidelity),
            ("purity", curve.purity))
    for name, arr in cols:
        a = np.asarray(arr, dtype=float)
        if a.size and not np.all(np.isfinite(a)):
            raise RuntimeError("non-finite %s value in output" % name)
        if a.size and (a.min() < -eps or a.max() > 1.0 + eps):
            raise RuntimeError("%s outside [0, 1]: [%g, %g]" % (name, a.min(), a.max()))
    p = np.asarray(curve.purity, dtype=float)
    if p.size and p.min() < 0.125 - eps:
        raise RuntimeError("purity below 1/8: %g" % p.min())


def _write_curve_csv(path, curve, protection=None):
    _check_ranges(curve)
    header = _CSV_HEADER + (",protection_factor" if protection is not None else "")
    lines = [header]
    for k in range(len(curve.times)):
        row = [curve.times[k], curve.n1[k], curve.n2[k], curve.n3[k],
               curve.n3_tri[k], curve.fidelity[k], curve.purity[k]]
        if protection is not None:
            row.append(protection[k])
        lines.append(",".join("%.12g" % v for v in row))
    with open(path, "w") as f:
        f.write("\n".join(lines) + "\n")


def _write_header_only(path, extra=False):
    with open(path, "w") as f:
        f.write(_CSV_HEADER + (",protection_factor" if extra else "") + "\n")


#
# Minimal self-contained SVG line plot; deterministic bytes.
#

_SVG_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd")
_PLOT = (64.0, 18.0, 700.0, 398.0)  # x0, y0, x1, y1 of the data box


def _ticks(lo, hi):
    span = hi - lo
    raw = span / 4.0
    mag = 10.0 ** math.floor(math.log10(raw))
    step = 10.0 * mag
    for m in (1.0, 2.0, 2.5, 5.0):
        if m * mag >= raw - 1e-12 * span:
            step = m * mag
            break
    first = math.ceil(lo / step - 1e-9)
    out = []
    k = first
    while k * step <= hi + 1e-9 * span:
        v = k * step
        out.append(0.0 if abs(v) < 1e-12 * span else v)
        k += 1
    return out


def _render_svg(path, title, xlabel, ylabel, series):
    xs_all = [x for _, xs, _ in series for x in xs]
    ys_all = [y for _, _, ys in series for y in ys]
    x_lo, x_hi = (min(xs_all), max(xs_all)) if xs_all else (0.0, 1.0)
    y_lo, y_hi = (min(ys_all), max(ys_all)) if ys_all else (0.0, 1.0)
    if x_hi <= x_lo:
        x_hi = x_lo + 1.0
    pad = 0.05 * (y_hi - y_lo) or 0.05
    y_lo, y_hi = y_lo - pad, y_hi + pad
    px0, py0, px1, py1 = _PLOT

    def sx(v):
        return px0 + (v - x_lo) / (x_hi - x_lo) * (px1 - px0)

    def sy(v):
        return py1 - (v - y_lo) / (y_hi - y_lo) * (py1 - py0)

    parts = [
        '<svg xmlns="http://www.w3.org/2000/svg" width="720" height="440" '
        'viewBox="0 0 720 440" font-family="monospace" font-size="11">',
        '<rect x="0" y="0" width="720" height="440" fill="#ffffff"/>',
        '<text x="382" y="13" text-anchor="middle" font-size="13">%s</text>' % title,
    ]
    for v in _ticks(x_lo, x_hi):
        x = sx(v)
        parts.append('<line x1="%.6g" y1="%.6g" x2="%.6g" y2="%.6g" stroke="#dddddd"/>'
                     % (x, py0, x, py1))
        parts.append('<text x="%.6g" y="%.6g" text-anchor="middle">%.6g</text>'
                     % (x, py1 + 16, v))
    for v in _ticks(y_lo, y_hi):
        y = sy(v)
        parts.append('<line x1="%.6g" y1="%.6g" x2="%.6g" y2="%.6g" stroke="#dddddd"/>'
                     % (px0, y, px1, y))
        parts.append('<text x="%.6g" y="%.6g" text-anchor="end">%.6g</text>'
                     % (px0 - 6, y + 4, v))
    parts.append('<rect x="%.6g" y="%.6g" width="%.6g" height="%.6g" '
                 'fill="none" stroke="#333333"/>' % (px0, py0, px1 - px0, py1 - py0))
    parts.append('<text x="%.6g" y="434" text-anchor="middle">%s</text>'
                 % ((px0 + px1) / 2.0, xlabel))
    parts.append('<text x="14" y="%.6g" text-anchor="middle" '
                 'transform="rotate(-90 14 %.6g)">%s</text>'
                 % ((py0 + py1) / 2.0, (py0 + py1) / 2.0, ylabel))
    for i, (label, xs, ys) in enumerate(series):
        color = _SVG_COLORS[i % len(_SVG_COLORS)]
        if xs:
            pts = " ".join("%.6g,%.6g" % (sx(x), sy(y)) for x, y in zip(xs, ys))
            parts.append('<polyline points="%s" fill="none" stroke="%s" '
                         'stroke-width="1.5"/>' % (pts, color))
        ly = py0 + 16 + 16 * i
        parts.append('<line x1="%.6g" y1="%.6g" x2="%.6g" y2="%.6g" stroke="%s" '
                     'stroke-width="1.5"/>' % (px1 - 150, ly, px1 - 126, ly, color))
        parts.append('<text x="%.6g" y="%.6g">%s</text>' % (px1 - 120, ly + 4, label))
    parts.append("</svg>")
    with open(path, "w") as f:
        f.write("\n".join(parts) + "\n")


def _out_path(cfg, name):
    out = cfg["out.dir"]
    os.makedirs(out, exist_ok=True)
    return os.path.join(out, name)


def _emit(path):
    print("wrote %s" % path)


def cmd_decay(cfg):
    """Markovian decay sweep plus the closed-form overlay."""
    if cfg["bath.mode"] != "markovian":
        raise ConfigError("decay runs the Markovian model; set bath.mode = markovian")
    spins = _spins(cfg)
    rho0 = _PREPARE[cfg["state"]]()
    noise = NoiseModel.from_spins(spins)
    t_final = cfg["grid.t_final_s"]
    step = cfg["grid.step_s"]
    csv_path = _out_path(cfg, "decay.csv")
    ref_path = _out_path(cfg, "decay_analytic.csv")
    svg_path = _out_path(cfg, "decay.svg")
    if t_final == 0.0:
        _write_header_only(csv_path)
        _write_header_only(ref_path)
        _render_svg(svg_path, "decay: %s" % cfg["state"], "time / s",
                    "tripartite negativity", [])
        for p in (csv_path, ref_path, svg_path):
            _emit(p)
        return 0
    base = min(spins.t2_s) / 2000.0
    per_sample = max(1, int(math.ceil(step / base)))
    curve = evolve_markovian(rho0, spins, noise, t_final,
                             dt=step / per_sample, sample_every=per_sample)
    rates = RateSet.from_spins(spins)
    family = _ANALYTIC[cfg["state"]]
    oracle = curve_from_states(curve.times,
                               [family(t, rates) for t in curve.times], rho0)
    _write_curve_csv(csv_path, curve)
    _write_curve_csv(ref_path, oracle)
    times = [float(t) for t in curve.times]
    _render_svg(svg_path, "decay: %s" % cfg["state"], "time / s",
                "tripartite negativity",
                [("numeric", times, [float(v) for v in curve.n3_tri]),
                 ("closed form", times, [float(v) for v in oracle.n3_tri])])
    for p in (csv_path, ref_path, svg_path):
        _emit(p)
    return 0


def cmd_protect(cfg):
    """Paired protected/unprotected correlated-bath runs."""
    if cfg["dd.sequence"] == "none":
        raise ConfigError("protect requires dd.sequence = xy16s or kddxy")
    if cfg["bath.mode"] != "correlated":
        raise ConfigError("protect requires bath.mode = correlated")
    seed = _require_seed(cfg, "the correlated bath")
    spins = _spins(cfg)
    rho0 = _PREPARE[cfg["state"]]()
    schedule = _BUILDERS[cfg["dd.sequence"]](
        cfg["dd.tau_s"], cycles=cfg["dd.cycles"], flip_error=cfg["dd.flip_error"])
    noise = NoiseModel.from_spins(
        spins, bath_mode="correlated", ou_sigma=cfg["bath.sigma_rad_s"],
        ou_tau_c=cfg["bath.tau_c_s"], trajectories=cfg["bath.trajectories"],
        seed=seed)
    cyc = cycle_duration(schedule)
    total = cfg["dd.cycles"] * cyc
    # one shared step size so both arms see identical noise tracks
    base = min(min(spins.t2_s) / 2000.0, min_interpulse_delay(schedule) / 50.0)
    spc = max(1, int(math.ceil(cyc / base - 1e-12)))
    dt = cyc / spc
    protected = run_protected(rho0, spins, noise, schedule, total, dt=dt)
    unprotected = evolve_correlated(rho0, spins, noise, None, total,
                                    dt=dt, sample_every=spc)
    ratio = []
    for p, u in zip(protected.n3_tri, unprotected.n3_tri):
        if u > 0.0:
            ratio.append(float(p) / float(u))
        else:
            ratio.append(float("inf") if p > 0.0 else float("nan"))
    prot_path = _out_path(cfg, "protected.csv")
    unprot_path = _out_path(cfg, "unprotected.csv")
    svg_path = _out_path(cfg, "protect.svg")
    _write_curve_csv(prot_path, protected, protection=ratio)
    _write_curve_csv(unprot_path, unprotected)
    times = [float(t) for t in protected.times]
    _render_svg(svg_path, "%s under %s" % (cfg["state"], cfg["dd.sequence"]),
                "time / s", "tripartite negativity",
                [("protected", times, [float(v) for v in protected.n3_tri]),
                 ("unprotected", [float(t) for t in unprotected.times],
                  [float(v) for v in unprotected.n3_tri])])
    for p in (prot_path, unprot_path, svg_path):
        _emit(p)
    print("protection factor at %.6g s: %.6g" % (times[-1], ratio[-1]))
    return 0


_PLUS = np.full((2, 2), 0.5, dtype=complex)
_GROUND = np.diag([1.0, 0.0]).astype(complex)


def _coherence_time(sigma, tau_c, trajectories, seed, target):
    """1/e time of the qubit-1 coherence under the OU bath alone."""
    rho0 = np.kron(_PLUS, np.kron(_GROUND, _GROUND))
    noise = NoiseModel(kappa_x=(0.0, 0.0, 0.0), kappa_z=(0.0, 0.0, 0.0),
                       bath_mode="correlated", ou_sigma=sigma, ou_tau_c=tau_c,
                       trajectories=trajectories, seed=seed)
    spins = SpinSystem()
    t_final = 2.5 * target
    dt = min(tau_c / 20.0, target / 1000.0)
    n = max(1, int(round(t_final / dt)))
    curve = evolve_correlated(rho0, spins, noise, None, t_final, dt=dt,
                              sample_every=max(1, n // 500))
    coh = np.array([2.0 * abs(s[0, 4]) for s in curve.states])
    target_level = math.exp(-1.0)
    below = np.nonzero(coh < target_level)[0]
    if len(below) == 0:
        return float("inf")
    k = int(below[0])
    t0, t1 = curve.times[k - 1], curve.times[k]
    c0, c1 = coh[k - 1], coh[k]
    return float(t0 + (c0 - target_level) * (t1 - t0) / (c0 - c1))


def cmd_calibrate(cfg):
    """Bisect ou_sigma to the configured qubit-1 T2."""
    if cfg["bath.mode"] != "correlated":
        raise ConfigError("calibrate requires bath.mode = correlated")
    seed = _require_seed(cfg, "the correlated bath")
    spins = _spins(cfg)
    target = spins.t2_s[0]
    tau_c = cfg["bath.tau_c_s"]
    if tau_c <= 0:
        raise ConfigError("calibrate requires bath.tau_c_s > 0")
    traj = cfg["bath.trajectories"]
    lo = cfg["calibrate.sigma_lo_rad_s"]
    hi = cfg["calibrate.sigma_hi_rad_s"]
    if hi <= lo:
        raise ConfigError("calibrate.sigma_hi_rad_s must exceed sigma_lo_rad_s")
    t_lo = _coherence_time(lo, tau_c, traj, seed, target)
    t_hi = _coherence_time(hi, tau_c, traj, seed, target)
    # more noise decays faster: t(lo) must sit above the target, t(hi) below
    if not (t_lo > target > t_hi):
        raise RuntimeError(
            "no bracket: 1/e times [%.4g, %.4g] s do not straddle %.4g s"
            % (t_hi, t_lo, target))
    sigma, achieved, iterations = lo, t_lo, 0
    for _ in range(60):
        iterations += 1
        sigma = 0.5 * (lo + hi)
        achieved = _coherence_time(sigma, tau_c, traj, seed, target)
        if abs(achieved - target) <= 0.005 * target:
            break
        if achieved > target:
            lo = sigma
        else:
            hi = sigma
        # the ensemble mean floors how closely the target can be hit
        if hi - lo <= 1e-3 * hi:
            break
    if abs(achieved - target) > 0.02 * target:
        raise RuntimeError(
            "calibration stalled %.2f%% from the target 1/e time; "
            "raise bath.trajectories" % (100.0 * abs(achieved - target) / target))
    path = _out_path(cfg, "calibration.txt")
    with open(path, "w") as f:
        f.write("# calibrated correlated-bath fragment; paste into a config\n")
        f.write("bath.mode = correlated\n")
        f.write("bath.sigma_rad_s = %.12g\n" % sigma)
        f.write("bath.tau_c_s = %.12g\n" % tau_c)
        f.write("bath.trajectories = %d\n" % traj)
        f.write("seed = %d\n" % seed)
        f.write("# kappa_x = %s\n" % ",".join("%.12g" % (1.0 / t) for t in spins.t1_s))
        f.write("# kappa_z = %s\n" % ",".join("%.12g" % (1.0 / t) for t in spins.t2_s))
        f.write("# target_t2_s = %.12g\n" % target)
        f.write("# achieved_one_over_e_s = %.12g\n" % achieved)
        f.write("# bisection_iterations = %d\n" % iterations)
    _emit(path)
    print("sigma = %.6g rad/s, 1/e time %.6g s (target %.6g s)"
          % (sigma, achieved, target))
    return 0


def cmd_tomo(cfg):
    """Readout simulation or replay, reconstruction, fidelity report."""
    rho_ref = _PREPARE[cfg["state"]]()
    records_path = cfg["tomo.records"]
    if records_path:
        try:
            records = read_records(records_path)
        except OSError as err:
            raise ConfigError("cannot read records %s: %s" % (records_path, err))
    else:
        sigma = cfg["tomo.noise_sigma"]
        seed = _require_seed(cfg, "readout noise") if sigma > 0 else cfg.get("seed", 0)
        records = tomograph(rho_ref, noise_sigma=sigma, seed=seed)
        rec_out = _out_path(cfg, "tomo_records.txt")
        write_records(records, rec_out)
        _emit(rec_out)
    est = mle_reconstruct(records)
    fid = fidelity_report(est, rho_ref)
    true_path = _out_path(cfg, "tomo_true.json")
    est_path = _out_path(cfg, "tomo_reconstructed.json")
    report_path = _out_path(cfg, "tomo_report.txt")
    save_matrix(true_path, rho_ref)
    save_matrix(est_path, est)
    with open(report_path, "w") as f:
        f.write("state = %s\n" % cfg["state"])
        f.write("settings = %d\n" % len(records))
        f.write("fidelity = %.12g\n" % fid)
    for p in (true_path, est_path, report_path):
        _emit(p)
    print("fidelity = %.12g" % fid)
    return 0


def cmd_schedule_dump(cfg):
    """Write the pulse table of the configured sequence."""
    if cfg["dd.sequence"] == "none":
        raise ConfigError("schedule-dump requires dd.sequence = xy16s or kddxy")
    schedule = _BUILDERS[cfg["dd.sequence"]](
        cfg["dd.tau_s"], cycles=cfg["dd.cycles"], flip_error=cfg["dd.flip_error"])
    path = _out_path(cfg, "schedule.csv")
    with open(path, "w") as f:
        f.write(schedule_table(schedule))
    _emit(path)
    print("cycle duration %.12g s, %d pulses per cycle"
          % (cycle_duration(schedule), len(schedule.pulses)))
    return 0


_COMMANDS = {
    "decay": cmd_decay,
    "protect": cmd_protect,
    "calibrate": cmd_calibrate,
    "tomo": cmd_tomo,
    "schedule-dump": cmd_schedule_dump,
}


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="triq",
        description="three-qubit decay, decoupling, and tomography runner")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in _COMMANDS.items():
        p = sub.add_parser(name, help=fn.__doc__.splitlines()[0].lower())
        p.add_argument("--config", default=None, metavar="PATH")
        p.add_argument("--out", default=None, metavar="DIR")
        p.add_argument("--seed", default=None, metavar="U64")
    args = parser.parse_args(argv)
    try:
        cfg = load_config(path=args.config, seed=args.seed, out_dir=args.out)
        return _COMMANDS[args.command](cfg)
    except (ConfigError, ValueError) as err:
        print("config error: %s" % err, file=sys.stderr)
        return 2
    except (PhysicalityError, RuntimeError, ArithmeticError, np.linalg.LinAlgError) as err:
        print("numerical failure: %s" % err, file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
