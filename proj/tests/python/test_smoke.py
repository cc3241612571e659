import math
from pathlib import Path

import pytest

import repliscope as rs


def fig3c():
    return rs.ModelParams.two_kind(
        0.001,
        rs.StudyProfile(0.8, 0.05),
        replication_rate=0.2,
        comm=rs.CommunicationPolicy(0.0, 1.0, 1.0),
    )


def test_series_matches_fixed_point():
    p = fig3c()
    fp = rs.fixed_point(p)
    series = rs.series_distribution(p)
    bound = fp["bound"]
    for kind in range(2):
        for s in range(-10, 11):
            assert fp["masses"][kind][s + bound] == pytest.approx(series["masses"][kind][s + bound], abs=1e-10)


def test_activity_probabilities():
    p = fig3c()
    assert rs.pr_activity(p) == pytest.approx(0.2406, abs=1e-12)
    assert rs.pr_new_given_activity(p) == pytest.approx(0.0406 / 0.2406, rel=1e-12)


def test_metrics_rows():
    rows = rs.metrics(fig3c(), window=(-12, 12))
    by_tally = {r["tally"]: r for r in rows}
    assert by_tally[4]["precision"] > 0.9
    assert by_tally[1]["precision"] < 0.05
    assert all(r["precision"] is None or 0.0 <= r["precision"] <= 1.0 for r in rows)


def test_simulation_is_seeded():
    p = fig3c()
    a = rs.simulate(p, seed=7, events=50_000)
    b = rs.simulate(p, seed=7, events=50_000)
    assert a["masses"] == b["masses"]
    assert a["distance_to_fixed_point"] < 0.05


def test_targeting_and_errors():
    p = fig3c().with_targeting(0.5, [1, 2, 3])
    assert not rs.fixed_point(p)["empty_target_mass"]
    with pytest.raises(rs.ReplicationModelError):
        rs.ModelParams.two_kind(1.5)


def test_suppression_report():
    p = rs.ModelParams.two_kind(0.01, rs.StudyProfile(0.8, 0.05), replication_rate=0.1,
                                comm=rs.CommunicationPolicy(0.5, 0.5, 0.5))
    rep = rs.suppression_report(p)
    assert rep["regime_valid"]
    assert math.isfinite(rep["cNewNegative"]["numeric_gradient"])


def test_cli_roundtrip():
    cfg = Path(__file__).resolve().parents[2] / "configs" / "fig3c.cfg"
    code, out, _ = rs.run_command(["series", "--config", str(cfg)])
    assert code == 0
    assert out.startswith("tally,")
    assert "fig3c" in rs.bundled_configs()
