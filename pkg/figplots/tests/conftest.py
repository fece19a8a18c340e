import subprocess
import sys

import pytest

FIG1_TOML = """
[geometry]
ap_region_radius = 120.0
ue_guard_margin = 50.0

[sweep]
lambda_ap = [1e-3]
lambda_ue = [1e-3, 1e-2]

[run]
activity_draws = 2
seed = 3
"""

FIG2_TOML = """
[geometry]
ap_region_radius = 450.0
ue_guard_margin = 110.0

[sweep]
lambda_active = [2e-6, 4e-6]
n_values = [1, 2]

[run]
link_draws = 120
seed = 5
"""

FIG3_TOML = """
[geometry]
ap_region_radius = 200.0
ue_guard_margin = 40.0

[sweep]
lambda_ap = [1e-5, 1e-3]
lambda_ue = [1e-2]

[run]
trials = 200
seed = 9
max_sim_expected_aps = 1000.0
"""


@pytest.fixture(scope="session")
def sweep_csvs(tmp_path_factory):
    """Real CSVs produced by the upstream CLI at desk-test scale.

    fig3 deliberately includes one point too dense to simulate, so the
    renderer sees blank simulation cells alongside filled ones.
    """
    root = tmp_path_factory.mktemp("sweeps")
    paths = {}
    for kind, toml in (("fig1", FIG1_TOML), ("fig2", FIG2_TOML), ("fig3", FIG3_TOML)):
        config = root / f"{kind}.toml"
        config.write_text(toml, encoding="utf-8")
        out = root / f"{kind}.csv"
        proc = subprocess.run(
            [sys.executable, "-m", "cellcov3d.cli", kind, "--config", str(config), "--out", str(out)],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0, proc.stderr
        paths[kind] = out
    return paths
