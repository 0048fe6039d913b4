import numpy as np
import pytest

from triq import build_xy16s, load_matrix, schedule_table
from triq.cli import ConfigError, load_config, main, parse_config


def write(tmp_path, text, name="run.cfg"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def run(tmp_path, cfg_text, command="decay", out="out", seed=None):
    cfg = write(tmp_path, cfg_text)
    argv = [command, "--config", cfg, "--out", str(tmp_path / out)]
    if seed is not None:
        argv += ["--seed", str(seed)]
    return main(argv), tmp_path / out


# -- configuration ----------------------------------------------------------

def test_parse_config_values_comments_defaults():
    cfg = parse_config(
        "# leading comment\n"
        "state = wwbar\n"
        "\n"
        "grid.t_final_s = 0.25  # trailing comment\n"
        "spins.t1_s = 5.0, 5.0, 5.0\n"
    )
    assert cfg["state"] == "wwbar"
    assert cfg["grid.t_final_s"] == 0.25
    assert cfg["spins.t1_s"] == (5.0, 5.0, 5.0)
    assert cfg["bath.tau_c_s"] == 0.01  # untouched default
    assert cfg.get("seed") is None  # no default seed


def test_parse_config_diagnostics_carry_line_numbers():
    with pytest.raises(ConfigError, match="<config>:2: expected key = value"):
        parse_config("state = ghz\nwhat\n")
    with pytest.raises(ConfigError, match=":3: duplicate key 'state'"):
        parse_config("state = ghz\n\nstate = w\n")
    with pytest.raises(ConfigError, match="unknown key"):
        parse_config("stat = ghz\n")
    with pytest.raises(ConfigError, match="one of"):
        parse_config("state = bell\n")
    with pytest.raises(ConfigError, match="three"):
        parse_config("spins.t2_s = 0.5, 0.5\n")
    with pytest.raises(ConfigError, match="positive"):
        parse_config("grid.step_s = 0\n")


def test_seed_parsing_bounds():
    assert parse_config("seed = 18446744073709551615\n")["seed"] == 2**64 - 1
    with pytest.raises(ConfigError, match="seed"):
        parse_config("seed = -1\n")
    with pytest.raises(ConfigError, match="seed"):
        parse_config("seed = 18446744073709551616\n")
    with pytest.raises(ConfigError, match="seed"):
        parse_config("seed = ghz\n")


def test_precedence_file_env_flags(tmp_path):
    path = write(tmp_path, "grid.t_final_s = 0.5\nseed = 1\n")
    env = {"TRIQ_GRID__T_FINAL_S": "0.75", "HOME": "/nope"}
    cfg = load_config(path, environ=env, seed="9", out_dir="somewhere")
    assert cfg["grid.t_final_s"] == 0.75  # env beats file
    assert cfg["seed"] == 9  # flag beats file
    assert cfg["out.dir"] == "somewhere"


def test_unknown_env_key_rejected(tmp_path):
    with pytest.raises(ConfigError, match="TRIQ_NOPE"):
        load_config(None, environ={"TRIQ_NOPE": "1"})


def test_missing_config_file():
    with pytest.raises(ConfigError, match="cannot read config"):
        load_config("/no/such/file.cfg", environ={})


# -- decay ------------------------------------------------------------------

DECAY_CFG = "state = ghz\ngrid.t_final_s = 0.02\ngrid.step_s = 0.01\n"


def test_decay_smoke_outputs(tmp_path):
    rc, out = run(tmp_path, DECAY_CFG)
    assert rc == 0
    csv = (out / "decay.csv").read_text().splitlines()
    assert csv[0] == "time_s,N1,N2,N3,N3_tri,fidelity,purity"
    assert csv[1] == "0,1,1,1,1,1,1"
    assert len(csv) == 4  # t = 0, 0.01, 0.02
    assert (out / "decay_analytic.csv").exists()
    assert (out / "decay.svg").read_text().startswith("<svg")


def test_decay_numeric_tracks_analytic(tmp_path):
    rc, out = run(tmp_path, DECAY_CFG)
    assert rc == 0
    num = np.genfromtxt(out / "decay.csv", delimiter=",", skip_header=1)
    ana = np.genfromtxt(out / "decay_analytic.csv", delimiter=",", skip_header=1)
    assert np.max(np.abs(num - ana)) < 1e-6


def test_decay_byte_determinism(tmp_path):
    rc1, out1 = run(tmp_path, DECAY_CFG, out="a")
    rc2, out2 = run(tmp_path, DECAY_CFG, out="b")
    assert rc1 == rc2 == 0
    for name in ("decay.csv", "decay_analytic.csv", "decay.svg"):
        assert (out1 / name).read_bytes() == (out2 / name).read_bytes()


def test_decay_zero_duration_writes_headers_only(tmp_path):
    rc, out = run(tmp_path, "grid.t_final_s = 0\n")
    assert rc == 0
    assert (out / "decay.csv").read_text() == \
        "time_s,N1,N2,N3,N3_tri,fidelity,purity\n"
    assert (out / "decay_analytic.csv").read_text().startswith("time_s,")


def test_decay_rejects_correlated_mode(tmp_path):
    rc, _ = run(tmp_path, "bath.mode = correlated\nseed = 1\n")
    assert rc == 2


# -- protect ----------------------------------------------------------------

PROTECT_CFG = (
    "state = ghz\n"
    "bath.mode = correlated\n"
    "bath.sigma_rad_s = 13.7\n"
    "bath.trajectories = 4\n"
    "dd.sequence = xy16s\n"
    "dd.tau_s = 0.001\n"
    "grid.t_final_s = 0.016\n"
    "seed = 5\n"
)


def test_protect_smoke_outputs(tmp_path):
    rc, out = run(tmp_path, PROTECT_CFG, command="protect")
    assert rc == 0
    prot = (out / "protected.csv").read_text().splitlines()
    unprot = (out / "unprotected.csv").read_text().splitlines()
    assert prot[0] == "time_s,N1,N2,N3,N3_tri,fidelity,purity,protection_factor"
    assert unprot[0] == "time_s,N1,N2,N3,N3_tri,fidelity,purity"
    assert len(prot) == 3 and len(unprot) == 3  # t = 0 and one cycle
    pf = float(prot[-1].split(",")[-1])
    assert np.isfinite(pf) and pf > 0
    assert (out / "protect.svg").exists()


def test_protect_config_errors(tmp_path):
    base = PROTECT_CFG.replace("dd.sequence = xy16s\n", "")
    assert run(tmp_path, base, command="protect")[0] == 2  # sequence = none
    bad_mode = PROTECT_CFG.replace("bath.mode = correlated\n", "")
    assert run(tmp_path, bad_mode, command="protect", out="o2")[0] == 2
    no_seed = PROTECT_CFG.replace("seed = 5\n", "")
    assert run(tmp_path, no_seed, command="protect", out="o3")[0] == 2


# -- calibrate --------------------------------------------------------------

def test_calibrate_no_bracket_is_numerical_failure(tmp_path):
    cfg = (
        "bath.mode = correlated\n"
        "bath.trajectories = 8\n"
        "calibrate.sigma_lo_rad_s = 1\n"
        "calibrate.sigma_hi_rad_s = 2\n"
        "seed = 2\n"
    )
    rc, _ = run(tmp_path, cfg, command="calibrate")
    assert rc == 3


def test_calibrate_doubling_trajectories_is_stable(tmp_path):
    # doubling the ensemble moves the calibrated sigma by well under 3%
    results = {}
    for n in (128, 256):
        cfg = (
            "bath.mode = correlated\n"
            "bath.trajectories = %d\n"
            "calibrate.sigma_lo_rad_s = 12\n"
            "calibrate.sigma_hi_rad_s = 16\n"
            "seed = 2\n" % n
        )
        rc, out = run(tmp_path, cfg, command="calibrate", out="cal%d" % n)
        assert rc == 0
        text = (out / "calibration.txt").read_text()
        parsed = parse_config(text)
        assert parsed["bath.mode"] == "correlated"
        assert parsed["seed"] == 2
        results[n] = parsed["bath.sigma_rad_s"]
        achieved = float(
            [l for l in text.splitlines() if "achieved" in l][0].split("=")[1])
        assert abs(achieved - 0.53) < 0.01
    assert results[128] == pytest.approx(13.5, abs=1e-9)
    assert results[256] == pytest.approx(13.53125, abs=1e-9)
    assert abs(results[256] - results[128]) / results[128] < 0.03


# -- tomo -------------------------------------------------------------------

TOMO_CFG = "state = w\ntomo.noise_sigma = 0.05\nseed = 11\n"


def test_tomo_smoke_and_exact_replay(tmp_path):
    rc, out = run(tmp_path, TOMO_CFG, command="tomo")
    assert rc == 0
    report = (out / "tomo_report.txt").read_text().splitlines()
    assert report[0] == "state = w"
    assert report[1] == "settings = 7"
    fid = float(report[2].split("=")[1])
    assert 0.9 < fid < 1.0
    true = load_matrix(out / "tomo_true.json")
    est = load_matrix(out / "tomo_reconstructed.json")
    assert true.shape == est.shape == (8, 8)
    # replaying the written records reproduces the report byte for byte
    replay = TOMO_CFG + "tomo.records = %s\n" % (out / "tomo_records.txt")
    rc2, out2 = run(tmp_path, replay, command="tomo", out="replay")
    assert rc2 == 0
    assert (out2 / "tomo_report.txt").read_bytes() == \
        (out / "tomo_report.txt").read_bytes()
    assert not (out2 / "tomo_records.txt").exists()


def test_tomo_noise_free_needs_no_seed(tmp_path):
    rc, out = run(tmp_path, "state = ghz\n", command="tomo")
    assert rc == 0
    fid = float((out / "tomo_report.txt").read_text()
                .splitlines()[2].split("=")[1])
    assert fid > 0.999


def test_tomo_noisy_requires_seed(tmp_path):
    rc, _ = run(tmp_path, "tomo.noise_sigma = 0.05\n", command="tomo")
    assert rc == 2


def test_tomo_missing_records_file(tmp_path):
    rc, _ = run(tmp_path, "tomo.records = /no/such/records.txt\n",
                command="tomo")
    assert rc == 2


def test_tomo_incomplete_records_file(tmp_path):
    bad = tmp_path / "partial.txt"
    bad.write_text("setting,observable_index,value\nIII,0,0.5\n")
    rc, _ = run(tmp_path, "tomo.records = %s\n" % bad, command="tomo")
    assert rc == 2


# -- schedule-dump ----------------------------------------------------------

def test_schedule_dump_matches_library_table(tmp_path):
    cfg = "dd.sequence = xy16s\ndd.tau_s = 0.25e-3\n"
    rc, out = run(tmp_path, cfg, command="schedule-dump")
    assert rc == 0
    assert (out / "schedule.csv").read_text() == \
        schedule_table(build_xy16s(0.25e-3))


def test_schedule_dump_requires_sequence(tmp_path):
    rc, _ = run(tmp_path, "state = ghz\n", command="schedule-dump")
    assert rc == 2


# -- argument plumbing ------------------------------------------------------

def test_unknown_subcommand_exits_via_argparse():
    with pytest.raises(SystemExit):
        main(["frobnicate"])


def test_env_override_reaches_run(tmp_path, monkeypatch):
    monkeypatch.setenv("TRIQ_GRID__T_FINAL_S", "0.01")
    rc, out = run(tmp_path, DECAY_CFG)
    assert rc == 0
    rows = (out / "decay.csv").read_text().splitlines()
    assert rows[-1].startswith("0.01,")
    assert len(rows) == 3  # 0 and 0.01 only


def test_out_dir_nested_creation(tmp_path):
    rc, out = run(tmp_path, DECAY_CFG, out="deep/nested/dir")
    assert rc == 0
    assert (out / "decay.csv").exists()
