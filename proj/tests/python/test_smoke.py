import math
import os
from pathlib import Path

import pytest

import bvpair

SCENARIOS = Path(os.environ.get("BVPAIR_SCENARIO_DIR", Path(__file__).resolve().parents[2] / "scenarios"))


def test_cantor_values():
    assert bvpair.cantor_cdf_rational(1, 3) == 0.5
    assert abs(bvpair.cantor_cdf(0.25) - 1.0 / 3.0) < 1e-15
    assert bvpair.cantor_cdf(0.5) == 0.5


def test_check_names():
    names = bvpair.check_names()
    assert "gauss_green" in names and "recovery" in names


def test_s2_atoms_and_weak_form():
    sc = bvpair.load(SCENARIOS / "s2_sign_linear.toml")
    assert sc.name == "S2"
    assert [j["x"] for j in sc.jumps] == [0.0, 1.0]
    for lam in (0.0, 0.25, 1.0):
        assert abs(sc.atom("internal", lam, 0.0) - (1.0 - 2.0 * lam)) < 1e-12
    phi = sc.phi_names[0]
    assert math.isclose(sc.pair("V", 0.0, phi), sc.weak_pair("V", 0.0, phi), abs_tol=1e-7)


def test_report_round_trip():
    report = bvpair.run(SCENARIOS / "s3_sign_nonlinear.toml", only=["coarea", "gauss_green"])
    assert report["scenario"] == "S3"
    assert report["schema_version"] == bvpair.schema_version
    assert [c["name"] for c in report["checks"]] == ["coarea", "gauss_green"]
    assert report["pass"] is True


def test_errors_carry_codes():
    with pytest.raises(bvpair.BvpairError, match="PARSE_ERROR"):
        bvpair.Scenario.from_string('name = "x"\n[domain\n')


def test_normalized_toml_round_trip():
    sc = bvpair.load(SCENARIOS / "s2_sign_linear.toml")
    text = sc.to_toml()
    again = bvpair.Scenario.from_string(text)
    assert again.to_toml() == text
