import subprocess
import sys

from figplots.cli import main

META = "# tool=cellcov3d version=0.1.0 kind=fig1 config=abcdefabcdef seed=3"
FIG1_HEADER = "lambda_ap,lambda_ue,q_analytic,q_sim,ci,draws"


def test_cli_renders_fig1(sweep_csvs, tmp_path, capsys):
    out = tmp_path / "fig1.png"
    code = main(["--kind", "fig1", "--csv", str(sweep_csvs["fig1"]), "--out", str(out)])
    assert code == 0
    assert out.exists()
    assert str(out) in capsys.readouterr().err


def test_cli_usage_errors(capsys):
    assert main([]) == 1
    assert main(["--kind", "fig9", "--csv", "x.csv", "--out", "x.png"]) == 1
    assert main(["--bogus"]) == 1
    capsys.readouterr()


def test_cli_schema_mismatch_names_columns(sweep_csvs, tmp_path, capsys):
    out = tmp_path / "wrong.png"
    code = main(["--kind", "fig2", "--csv", str(sweep_csvs["fig1"]), "--out", str(out)])
    assert code == 1
    assert not out.exists()
    err = capsys.readouterr().err
    assert "missing columns" in err and "lambda_active" in err


def test_cli_empty_csv(tmp_path, capsys):
    csv_path = tmp_path / "empty.csv"
    csv_path.write_text(META + "\n" + FIG1_HEADER + "\n", encoding="utf-8")
    out = tmp_path / "never.png"
    assert main(["--kind", "fig1", "--csv", str(csv_path), "--out", str(out)]) == 1
    assert not out.exists()
    assert "no data rows" in capsys.readouterr().err


def test_cli_missing_file(tmp_path, capsys):
    out = tmp_path / "never.png"
    assert main(["--kind", "fig1", "--csv", str(tmp_path / "ghost.csv"), "--out", str(out)]) == 1
    assert not out.exists()
    capsys.readouterr()


def test_cli_dpi_and_title(sweep_csvs, tmp_path, capsys):
    small = tmp_path / "small.png"
    large = tmp_path / "large.png"
    assert main(["--kind", "fig1", "--csv", str(sweep_csvs["fig1"]), "--out", str(small), "--dpi", "60"]) == 0
    assert (
        main(
            [
                "--kind",
                "fig1",
                "--csv",
                str(sweep_csvs["fig1"]),
                "--out",
                str(large),
                "--dpi",
                "200",
                "--title",
                "activity",
            ]
        )
        == 0
    )
    capsys.readouterr()
    assert large.stat().st_size > small.stat().st_size


def test_module_entry_point(sweep_csvs, tmp_path):
    out = tmp_path / "fig1.png"
    proc = subprocess.run(
        [
            sys.executable,
            "-m",
            "figplots.cli",
            "--kind",
            "fig1",
            "--csv",
            str(sweep_csvs["fig1"]),
            "--out",
            str(out),
        ],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert out.exists()
