import math

import numpy as np
import pytest

from su3squeeze.cli import run


def read_csv(path):
    header, columns, rows, footer = [], None, [], []
    for line in path.read_text().splitlines():
        if line.startswith("#"):
            (footer if columns is not None else header).append(line)
        elif columns is None:
            columns = line.split(",")
        else:
            rows.append(line.split(","))
    return header, columns, rows, footer


def test_isotropy_small(tmp_path):
    out = tmp_path / "iso.csv"
    code = run(["isotropy", "--lambda", "1", "--samples", "5", "--seed", "3",
                "--out", str(out), "--no-timestamp"])
    assert code == 0
    header, columns, rows, footer = read_csv(out)
    assert columns == ["sample", "alpha3", "beta3", "chi", "variance", "deviation"]
    assert len(rows) == 5
    for row in rows:
        assert float(row[4]) == pytest.approx(1.0, abs=1e-9)
    assert any("max_deviation" in line for line in footer)


def test_isotropy_lambda_20(tmp_path):
    out = tmp_path / "iso20.csv"
    assert run(["isotropy", "--lambda", "20", "--samples", "100", "--seed", "1",
                "--out", str(out), "--no-timestamp"]) == 0
    _, _, rows, _ = read_csv(out)
    assert len(rows) == 100
    for row in rows:
        assert float(row[4]) == pytest.approx(20.0, abs=1e-9)


def test_isotropy_rejects_zero_samples(tmp_path):
    with pytest.raises(SystemExit) as exc:
        run(["isotropy", "--lambda", "2", "--samples", "0",
             "--out", str(tmp_path / "x.csv")])
    assert exc.value.code == 2


def test_exact_minimum_near_calibration_anchor(tmp_path):
    out = tmp_path / "exact.csv"
    assert run(["exact", "--lambda", "20", "--steps", "60", "--t-max", "0.03",
                "--out", str(out), "--no-timestamp"]) == 0
    _, columns, rows, _ = read_csv(out)
    assert columns == ["t", "min_variance", "alpha3", "beta3", "chi"]
    assert len(rows) == 61
    t = np.array([float(r[0]) for r in rows])
    v = np.array([float(r[1]) for r in rows])
    assert v[0] == pytest.approx(20.0, abs=1e-4)
    assert abs(t[np.argmin(v)] - 0.015) <= 0.003
    assert v.min() < 20.0


def test_exact_row_count(tmp_path):
    out = tmp_path / "rows.csv"
    assert run(["exact", "--lambda", "4", "--steps", "7", "--t-max", "0.05",
                "--out", str(out), "--no-timestamp"]) == 0
    _, _, rows, _ = read_csv(out)
    assert len(rows) == 8


def test_exact_threads_identical_data(tmp_path):
    # thread count is echoed in the config line but must not change the data
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    run(["exact", "--lambda", "5", "--steps", "10", "--t-max", "0.05",
         "--out", str(a), "--no-timestamp"])
    run(["exact", "--lambda", "5", "--steps", "10", "--t-max", "0.05",
         "--threads", "3", "--out", str(b), "--no-timestamp"])
    strip = [l for l in a.read_text().splitlines() if not l.startswith("# config")]
    stripb = [l for l in b.read_text().splitlines() if not l.startswith("# config")]
    assert strip == stripb


def test_byte_determinism_same_seed(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (a, b):
        run(["isotropy", "--lambda", "3", "--samples", "8", "--seed", "11",
             "--out", str(path), "--no-timestamp"])
    assert a.read_bytes() == b.read_bytes()


def test_timestamp_header_toggle(tmp_path):
    out = tmp_path / "t.csv"
    run(["isotropy", "--lambda", "1", "--samples", "1", "--out", str(out)])
    header, *_ = read_csv(out)
    assert any(line.startswith("# generated:") for line in header)
    run(["isotropy", "--lambda", "1", "--samples", "1", "--out", str(out),
         "--no-timestamp"])
    header, *_ = read_csv(out)
    assert not any(line.startswith("# generated:") for line in header)


def test_semiclassical_t0_threshold_and_backend_column(tmp_path):
    out = tmp_path / "sc.csv"
    assert run(["semiclassical", "--lambda", "8", "--backend", "exact",
                "--steps", "6", "--t-max", "0.02", "--out", str(out),
                "--no-timestamp"]) == 0
    _, columns, rows, _ = read_csv(out)
    assert columns == ["t", "min_variance", "alpha3", "beta3", "chi", "backend"]
    assert float(rows[0][1]) == pytest.approx(8.0, rel=0.01)
    assert rows[0][5] == "exact-kernel"


def test_semiclassical_rejects_unknown_backend(tmp_path):
    with pytest.raises(SystemExit) as exc:
        run(["semiclassical", "--lambda", "4", "--backend", "nope",
             "--out", str(tmp_path / "x.csv")])
    assert exc.value.code == 2


def test_wigner_slice_quantum_negativity(tmp_path):
    out = tmp_path / "wq.csv"
    assert run(["wigner-slice", "--lambda", "20", "--t", "0.015",
                "--evolution", "quantum", "--grid", "48",
                "--out", str(out), "--no-timestamp"]) == 0
    _, columns, rows, _ = read_csv(out)
    assert columns == ["alpha2", "beta2", "W"]
    assert len(rows) == 48 * 48
    values = np.array([float(r[2]) for r in rows])
    assert values.min() < -1e-3


def test_wigner_slice_classical_floor(tmp_path):
    # the classical slice never drops below the initial state's intrinsic
    # tail (about -8e-8 at lambda=20), far below plot scale but above -1e-7
    out = tmp_path / "wc.csv"
    assert run(["wigner-slice", "--lambda", "20", "--t", "0.015",
                "--evolution", "classical", "--grid", "48",
                "--out", str(out), "--no-timestamp"]) == 0
    _, _, rows, _ = read_csv(out)
    values = np.array([float(r[2]) for r in rows])
    assert values.min() > -1e-7


def test_wigner_slices_agree_at_t0(tmp_path):
    q, c = tmp_path / "q.csv", tmp_path / "c.csv"
    run(["wigner-slice", "--lambda", "6", "--t", "0", "--evolution", "quantum",
         "--grid", "24", "--out", str(q), "--no-timestamp"])
    run(["wigner-slice", "--lambda", "6", "--t", "0", "--evolution", "classical",
         "--grid", "24", "--out", str(c), "--no-timestamp"])
    vq = np.array([float(r[2]) for r in read_csv(q)[2]])
    vc = np.array([float(r[2]) for r in read_csv(c)[2]])
    assert np.max(np.abs(vq - vc)) < 1e-6


def test_scaling_two_lambdas(tmp_path):
    out = tmp_path / "s.csv"
    assert run(["scaling", "--lambdas", "6,12", "--steps", "40",
                "--out", str(out), "--no-timestamp"]) == 0
    _, columns, rows, footer = read_csv(out)
    assert columns == ["lambda", "t_min", "v_min", "v_min_over_lambda",
                       "degraded_samples"]
    assert len(rows) == 2
    assert any(line.startswith("# exponent_t") for line in footer)
    assert any(line.startswith("# exponent_v") for line in footer)


def test_scaling_rejects_single_lambda(tmp_path):
    with pytest.raises(SystemExit) as exc:
        run(["scaling", "--lambdas", "20", "--out", str(tmp_path / "x.csv")])
    assert exc.value.code == 2


def test_scaling_numerical_failure_exit_code(tmp_path):
    # lambda=1 has a constant Hamiltonian, so its curve has no minimum
    code = run(["scaling", "--lambdas", "1,2", "--steps", "10",
                "--out", str(tmp_path / "x.csv"), "--no-timestamp"])
    assert code == 3


def test_exact_rejects_zero_steps(tmp_path):
    with pytest.raises(SystemExit) as exc:
        run(["exact", "--lambda", "4", "--steps", "0",
             "--out", str(tmp_path / "x.csv")])
    assert exc.value.code == 2


def test_config_echo_in_header(tmp_path):
    out = tmp_path / "cfg.csv"
    run(["exact", "--lambda", "3", "--steps", "4", "--t-max", "0.01",
         "--out", str(out), "--no-timestamp"])
    header, *_ = read_csv(out)
    cfg = next(line for line in header if line.startswith("# config:"))
    assert "lambda=3" in cfg and "steps=4" in cfg


def test_version_flag():
    with pytest.raises(SystemExit) as exc:
        run(["--version"])
    assert exc.value.code == 0
