import pytest

from cellcov3d.analytic import DensityConfig, coverage_bounds, interference_laplace
from cellcov3d.channel import ChannelParams
from cellcov3d.cli import main
from cellcov3d.simulate import db_to_linear

TINY_FIG1 = """
[geometry]
ap_region_radius = 120.0
ue_guard_margin = 50.0

[sweep]
lambda_ap = [1e-3]
lambda_ue = [1e-3]

[run]
activity_draws = 2
seed = 3
"""


@pytest.fixture
def tiny_config(tmp_path):
    path = tmp_path / "tiny.toml"
    path.write_text(TINY_FIG1, encoding="utf-8")
    return str(path)


def test_version_flag():
    assert main(["--version"]) == 0


def test_usage_errors_exit_1(capsys):
    assert main([]) == 1
    assert main(["nope"]) == 1
    assert main(["fig1", "--bogus"]) == 1
    capsys.readouterr()


def test_fig1_to_stdout(tiny_config, capsys):
    assert main(["fig1", "--config", tiny_config]) == 0
    out = capsys.readouterr().out
    lines = out.splitlines()
    assert lines[0].startswith("# tool=cellcov3d")
    assert lines[1] == "lambda_ap,lambda_ue,q_analytic,q_sim,ci,draws"
    assert len(lines) == 3


def test_fig1_out_file(tiny_config, tmp_path, capsys):
    out_path = tmp_path / "fig1.csv"
    assert main(["fig1", "--config", tiny_config, "--out", str(out_path)]) == 0
    captured = capsys.readouterr()
    assert captured.out == ""
    assert str(out_path) in captured.err
    assert out_path.read_text(encoding="utf-8").endswith("\n")


def test_fig1_trials_flag_overrides_draws(tiny_config, capsys):
    assert main(["fig1", "--config", tiny_config, "--trials", "1"]) == 0
    last = capsys.readouterr().out.strip().splitlines()[-1]
    assert last.endswith(",1")


def test_fig1_seed_flag_changes_identity(tiny_config, capsys):
    assert main(["fig1", "--config", tiny_config, "--seed", "21"]) == 0
    first = capsys.readouterr().out.splitlines()[0]
    assert "seed=21" in first


def test_bounds_command_matches_library(tmp_path, capsys):
    out_path = tmp_path / "bounds.csv"
    code = main(
        [
            "bounds",
            "--lambda-ap",
            "1e-3",
            "--lambda-ue",
            "1e-2",
            "--theta-db",
            "-10",
            "--out",
            str(out_path),
        ]
    )
    capsys.readouterr()
    assert code == 0
    header, row = out_path.read_text(encoding="utf-8").splitlines()[1:3]
    assert header.startswith("lambda_ap,lambda_ue,theta_db,cov_lower,cov_upper")
    cells = row.split(",")
    expected = coverage_bounds(db_to_linear(-10.0), DensityConfig(1e-3, 1e-2), ChannelParams())
    assert float(cells[3]) == pytest.approx(expected.lower, rel=1e-9)
    assert float(cells[4]) == pytest.approx(expected.upper, rel=1e-9)


def test_laplace_command_matches_library(capsys):
    code = main(
        [
            "laplace",
            "--lambda-active",
            "1e-6",
            "--serving-distance",
            "10",
            "--s",
            "0",
            "1e8",
        ]
    )
    assert code == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[1] == "s,laplace"
    first = lines[2].split(",")
    second = lines[3].split(",")
    assert float(first[1]) == pytest.approx(1.0, abs=1e-12)
    expected = interference_laplace(1e8, 10.0, 1e-6, ChannelParams())
    assert float(second[1]) == pytest.approx(expected, rel=1e-9)


def test_laplace_upper_limit_flag(capsys):
    args = ["laplace", "--lambda-active", "1e-6", "--serving-distance", "10", "--s", "1e8"]
    assert main(args) == 0
    full = float(capsys.readouterr().out.splitlines()[2].split(",")[1])
    assert main(args + ["--upper-limit", "50"]) == 0
    windowed = float(capsys.readouterr().out.splitlines()[2].split(",")[1])
    assert windowed > full


def test_acceptance_list(capsys):
    assert main(["acceptance", "--list"]) == 0
    out = capsys.readouterr().out
    names = [line.split()[0] for line in out.splitlines()]
    assert names == ["channel-sanity", "A1", "A2", "A3", "A4", "A5", "A6", "A7", "A8", "A9"]


def test_acceptance_unknown_name_exits_1(capsys):
    assert main(["acceptance", "--only", "A99"]) == 1
    assert "configuration error" in capsys.readouterr().err


def test_config_error_exits_1(tmp_path, capsys):
    path = tmp_path / "bad.toml"
    path.write_text("[run]\nbogus = 1\n", encoding="utf-8")
    assert main(["fig1", "--config", str(path)]) == 1
    assert "configuration error" in capsys.readouterr().err


def test_degenerate_geometry_exits_2(tmp_path, capsys):
    path = tmp_path / "empty.toml"
    path.write_text(
        """
[geometry]
ap_region_radius = 1.0
ue_guard_margin = 0.5

[sweep]
lambda_ap = [1e-9]
lambda_ue = [1e-9]

[run]
activity_draws = 1
""",
        encoding="utf-8",
    )
    assert main(["fig1", "--config", str(path)]) == 2
    assert "degenerate geometry" in capsys.readouterr().err
