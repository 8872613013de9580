import math
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from diracjc import (
    ConservationError,
    NoAnalyticBackend,
    Scenario,
    ValidationFailure,
    asymptotic_exponential,
    run,
    validate,
)
from diracjc.cli import EXIT_CODES, main
from diracjc.scenario import parse_kv
from diracjc.simulate import energy_table

from conftest import coupling

ROOT = Path(__file__).resolve().parent.parent
SCEN = ROOT / "scenarios"


def write(tmp_path, text, name="s.cfg"):
    path = tmp_path / name
    path.write_text(text)
    return path


def load_csv(path):
    with open(path) as fh:
        header = fh.readline().strip().split(",")
    return header, np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)


def refine_maxima(y, t):
    """Parabolic refinement of interior local maxima."""
    out = []
    dt = t[1] - t[0]
    for i in range(1, len(y) - 1):
        if y[i] >= y[i - 1] and y[i] > y[i + 1]:
            den = y[i - 1] - 2 * y[i] + y[i + 1]
            out.append(t[i] + 0.5 * dt * (y[i - 1] - y[i + 1]) / den)
    return np.array(out)


CONST_G2 = """
modulation.kind = constant
coupling.g0 = 2
initial.kind = number
initial.n = 0
time.t_max = 10
time.samples = 1001
"""


def test_run_constant_period(tmp_path):
    out = tmp_path / "o.csv"
    assert main(["run", str(write(tmp_path, CONST_G2)), "-o", str(out)]) == 0
    header, data = load_csv(out)
    assert header == ["t", "sz", "lz", "jz", "entropy", "norm"]
    sz = data[:, 1]
    assert sz[0] == 0.5
    period = np.diff(refine_maxima(sz, data[:, 0]))
    assert np.allclose(period, math.pi / math.sqrt(5.0), atol=1e-5)
    assert math.pi / math.sqrt(5.0) == pytest.approx(1.4050, abs=1e-4)


def test_run_metadata_sidecar(tmp_path):
    out = tmp_path / "o.csv"
    main(["run", str(write(tmp_path, CONST_G2)), "-o", str(out)])
    meta = parse_kv(Path(str(out) + ".meta").read_text())
    assert meta["backend"] == "constant"
    for key in ("truncation_deficit", "rel_tol", "abs_tol", "max_step", "charge_drift", "norm_drift"):
        assert key in meta
    assert float(meta["charge_drift"]) <= 1e-8


def test_run_exponential_plateau(tmp_path):
    path = write(tmp_path, "modulation.kind = exponential\nmodulation.zeta = -1\ncoupling.g0 = 0.5\n")
    series = run(Scenario.load(path))
    a_inf, b_inf = asymptotic_exponential(0, coupling(0.5), -1.0)
    assert abs(series.sz[-1] - 0.5 * (abs(a_inf) ** 2 - abs(b_inf) ** 2)) <= 1e-5


def test_run_weyl_sinusoidal_periodic(tmp_path):
    text = (SCEN / "weyl_sinusoidal_g2_coherent.cfg").read_text()
    text = text.replace("time.t_max = 30", f"time.t_max = {4 * math.pi!r}")
    text = text.replace("time.samples = 3001", "time.samples = 2001")
    series = run(Scenario.from_text(text))
    for name, col in series.columns().items():
        if name == "t":
            continue
        assert np.max(np.abs(col[:1001] - col[1000:])) <= 1e-6, name


def test_stdout_mode(tmp_path, capsys):
    assert main(["run", str(write(tmp_path, CONST_G2.replace("1001", "3")))]) == 0
    out, err = capsys.readouterr()
    assert out.splitlines()[0] == "t,sz,lz,jz,entropy,norm" and len(out.splitlines()) == 4
    assert "backend = constant" in err


def test_deterministic_bytes(tmp_path):
    src = SCEN / "sinusoidal_g1_coherent.cfg"
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    main(["run", str(src), "-o", str(a)])
    main(["run", str(src), "-o", str(b)])
    data = a.read_bytes()
    assert data == b.read_bytes()
    assert b"\r" not in data
    first = data.split(b"\n")[1].split(b",")
    assert first[0] == b"0" and float(first[1]) == pytest.approx(0.5, abs=1e-15)
    row = data.split(b"\n")[7].split(b",")
    assert all(len(x.lstrip(b"-").replace(b".", b"").split(b"e")[0].lstrip(b"0")) <= 17 for x in row)


def test_energies_exponential(tmp_path):
    out = tmp_path / "e.csv"
    assert main(["energies", str(SCEN / "energies_exponential.cfg"), "--n", "0", "-o", str(out)]) == 0
    header, data = load_csv(out)
    assert header == ["t", "n", "e_plus", "e_minus"]
    e = data[:, 2]
    assert e[0] == pytest.approx(math.sqrt(5.0), rel=1e-15)
    assert np.all(np.diff(e) < 0) and e[-1] == pytest.approx(1.0, abs=1e-3)
    assert np.array_equal(data[:, 3], -e)
    meta = parse_kv(Path(str(out) + ".meta").read_text())
    assert float(meta["constant_e_plus.n0"]) == pytest.approx(math.sqrt(5.0))
    assert float(meta["rest_energy"]) == 1.0


def test_energies_sinusoidal_range():
    rows, _ = energy_table(Scenario.load(SCEN / "energies_sinusoidal.cfg"), [3])
    e = np.array([r[2] for r in rows])
    assert e.min() == pytest.approx(1.0, abs=1e-12)
    assert e.max() == pytest.approx(math.sqrt(17.0), rel=1e-5)


def test_energies_weyl_and_row_order(tmp_path, capsys):
    assert main(["energies", str(SCEN / "energies_weyl_sinusoidal.cfg"), "--n", "0,1"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[1] == "0,0,0,-0" or lines[1].startswith("0,0,0,")
    assert lines[2].startswith("0,1,")
    assert lines[3].startswith("0.01,0,")


def test_validate_constant_and_exponential(capsys):
    assert main(["validate", str(SCEN / "constant_g2_number.cfg")]) == 0
    report = parse_kv(capsys.readouterr().out)
    assert report["passed"] == "true" and float(report["amplitude_error"]) <= 1e-8
    rep = validate(Scenario.load(SCEN / "exponential_g1_number.cfg"))
    assert rep["amplitude_error"] <= 1e-6


def test_validate_refuses_full_sinusoidal(capsys):
    code = main(["validate", str(SCEN / "sinusoidal_g2_number.cfg")])
    assert code == EXIT_CODES["no-analytic"]
    assert "category=no-analytic" in capsys.readouterr().err
    with pytest.raises(NoAnalyticBackend):
        validate(Scenario.load(SCEN / "sinusoidal_g2_number.cfg"))


def test_validate_names_failing_metric(tmp_path, capsys):
    # a coarse output grid lets the loose tolerances show
    loose = CONST_G2.replace("1001", "11") + (
        "integrator.rel_tol = 1e-3\nintegrator.abs_tol = 1e-3\nintegrator.max_step = 5\n")
    code = main(["validate", str(write(tmp_path, loose))])
    assert code == EXIT_CODES["validation"]
    captured = capsys.readouterr()
    assert "amplitude_error" in captured.err
    assert parse_kv(captured.out)["passed"] == "false"
    with pytest.raises(ValidationFailure) as info:
        validate(Scenario.from_text(loose))
    assert "amplitude_error" in info.value.report["failed"]


def test_run_fails_on_charge_drift(tmp_path, capsys):
    loose = ("modulation.kind = sinusoidal\nmodulation.zeta = 1\nbackend = numeric\n"
             "integrator.rel_tol = 1e-2\nintegrator.abs_tol = 1e-2\nintegrator.max_step = 10\n"
             "time.samples = 11\n")
    with pytest.raises(ConservationError):
        run(Scenario.from_text(loose))
    assert main(["run", str(write(tmp_path, loose))]) == EXIT_CODES["convergence"]
    assert "category=convergence" in capsys.readouterr().err


def test_exit_codes_for_errors(tmp_path, capsys):
    assert main(["run", str(write(tmp_path, "model.mass = -1"))]) == EXIT_CODES["config"]
    assert "category=config" in capsys.readouterr().err
    trunc = "initial.kind = coherent\ninitial.alpha_sq = 5\ninitial.n_max = 5\n"
    assert main(["run", str(write(tmp_path, trunc))]) == EXIT_CODES["truncation"]
    assert "category=truncation" in capsys.readouterr().err
    assert main(["run", str(tmp_path / "missing.cfg")]) == EXIT_CODES["config"]
    forced = "modulation.kind = sinusoidal\nmodulation.zeta = 1\nbackend = analytic\n"
    assert main(["run", str(write(tmp_path, forced))]) == EXIT_CODES["no-analytic"]


def test_auto_backend_falls_back_outside_envelope(tmp_path, caplog):
    text = "modulation.kind = exponential\nmodulation.zeta = 1\ncoupling.g0 = 1\ntime.t_max = 5\ntime.samples = 51\n"
    series = run(Scenario.from_text(text))
    assert series.meta["backend"] == "numeric"
    assert "envelope" in series.meta["warnings"]


def test_ajc_scenario_runs():
    series = run(Scenario.load(SCEN / "ajc_constant_g1_number.cfg"))
    assert np.allclose(series.jz, 0.5 - 1, atol=1e-12)
    assert series.meta["mapping"] == "ajc"


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "diracjc", "validate",
                           str(SCEN / "sinusoidal_g1_number.cfg")],
                          capture_output=True, text=True)
    assert proc.returncode == EXIT_CODES["no-analytic"]
    assert proc.stderr.startswith("error: category=no-analytic")


def test_bad_n_list(capsys):
    with pytest.raises(SystemExit):
        main(["energies", str(SCEN / "energies_exponential.cfg"), "--n", "0,x"])
