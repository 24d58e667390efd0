import csv
import io
import json

import pytest

from decimesh import run_compare
from decimesh.report import HarnessParams, resolve_targets

from conftest import synthetic_molecule


@pytest.fixture(scope="module")
def small_report():
    mesh, atoms = synthetic_molecule(n_atoms=6, level=2, radius=6.0, seed=5)
    return run_compare(
        mesh, atoms, ["qe", "vol", "gb_qe"], ["50%", "25%", "10%"],
        params=HarnessParams(),
    )


def test_resolve_targets():
    assert resolve_targets(1000, ["50%", "25%", "10%"]) == [500, 250, 100]
    assert resolve_targets(1000, [0.5, 200, "120"]) == [500, 200, 120]
    assert resolve_targets(10, ["1%"]) == [4]  # floor of 4 faces


def test_row_count_and_order(small_report):
    rows = small_report.rows
    assert len(rows) == 10  # 3 costs x 3 targets + reference
    assert rows[0].cost_kind == "reference"
    kinds = [r.cost_kind for r in rows[1:]]
    assert kinds == ["qe"] * 3 + ["vol"] * 3 + ["gb_qe"] * 3
    targets = [r.target_faces for r in rows[1:4]]
    assert targets == resolve_targets(320, ["50%", "25%", "10%"])


def test_rows_carry_energy_and_quality(small_report):
    ref = small_report.rows[0]
    assert ref.error is None
    assert ref.g_pol < 0
    assert ref.delta_g_pol is None
    for row in small_report.rows[1:]:
        assert row.error is None, row.error
        assert row.actual_faces <= row.target_faces
        assert row.g_pol < 0
        assert row.delta_g_pol == pytest.approx(abs(row.g_pol - ref.g_pol))
        assert row.surface_area > 0
        assert row.g_nonpolar == pytest.approx(0.005 * row.surface_area)
        assert row.min_quality >= 2.0
        assert 0 <= row.well_centered_fraction <= 1
        assert row.collapses == (320 - row.actual_faces) // 2


def test_reference_only_when_no_costs():
    mesh, atoms = synthetic_molecule(n_atoms=4, level=1, radius=5.0, seed=6)
    report = run_compare(mesh, atoms, [], [0.5])
    assert len(report.rows) == 1
    assert report.rows[0].cost_kind == "reference"


def test_metadata_provenance(small_report):
    md = small_report.metadata
    assert md["params"]["rho"] == 5.0
    assert md["params"]["lam"] == 1e-8
    assert len(md["mesh_sha256"]) == 64
    assert len(md["atoms_sha256"]) == 64
    assert "informational" in md
    assert md["informational"]["largest_g_pol_drift_cost"] in ("qe", "vol", "gb_qe")
    assert isinstance(md["informational"]["volume_cost_drifts_most"], bool)


def test_csv_and_json_values_identical(small_report):
    parsed_json = json.loads(small_report.to_json())
    reader = csv.DictReader(io.StringIO(small_report.to_csv()))
    csv_rows = list(reader)
    assert len(csv_rows) == len(parsed_json["rows"])
    for jrow, crow in zip(parsed_json["rows"], csv_rows):
        for key, jval in jrow.items():
            cval = crow[key]
            if jval is None:
                assert cval == ""
            elif isinstance(jval, float):
                assert float(cval) == jval
            else:
                assert str(jval) == cval


def test_write_by_extension(tmp_path, small_report):
    jpath = tmp_path / "report.json"
    cpath = tmp_path / "report.csv"
    small_report.write(jpath)
    small_report.write(cpath)
    assert json.loads(jpath.read_text())["rows"]
    assert cpath.read_text().startswith("cost_kind,")
    with pytest.raises(ValueError):
        small_report.write(tmp_path / "report.txt")


def test_failed_cell_recorded_not_fatal():
    mesh, atoms = synthetic_molecule(n_atoms=4, level=1, radius=5.0, seed=8)
    report = run_compare(mesh, atoms, ["qe"], [2])  # target below the minimum
    assert len(report.rows) == 2
    assert report.rows[0].error is None
    assert report.rows[1].error is not None
    assert "target_faces" in report.rows[1].error


def test_reproducible_values():
    mesh, atoms = synthetic_molecule(n_atoms=4, level=1, radius=5.0, seed=9)
    r1 = run_compare(mesh.copy(), atoms, ["qe"], [0.5])
    r2 = run_compare(mesh.copy(), atoms, ["qe"], [0.5])
    for a, b in zip(r1.rows, r2.rows):
        assert a.g_pol == b.g_pol
        assert a.surface_area == b.surface_area
        assert a.actual_faces == b.actual_faces
