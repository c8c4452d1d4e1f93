import json

import jsonschema
import numpy as np
import pytest

from pcabiplot.conformance import (
    CHECKS,
    MARKS,
    CheckId,
    ConformanceReport,
    ConformanceRow,
    Status,
    emulate_biplot_prcomp,
    emulate_ggbiplot,
    emulate_reference,
    format_discrepancy,
    render_grid,
    run_conformance,
)
from pcabiplot.biplot import biplot_from_data
from pcabiplot.errors import ValidationError
from pcabiplot.fileio import load_schema
from pcabiplot.matrix import DataMatrix, mean_relative_difference
from pcabiplot.pca import EIGEN_RESCALED, SVD_REFERENCE, make_registry, pca_svd
from pcabiplot.svd import svd


@pytest.fixture
def report5(ex4):
    return run_conformance(ex4)


@pytest.mark.parametrize(
    "profile, check, expected",
    [
        ("eigen-n", "VarEqualsEigen", 0.2),
        ("eigen-gram", "VarEqualsEigen", 0.8),
        ("gsvd-n", "VarEqualsEigen", 0.1666667),
        ("biplot/prcomp-style", "SingularValueRelation", 0.08712907),
        ("biplot/prcomp-style", "ObsCoordsEqualU", 0.09544512),
        ("biplot/ggbiplot-style", "FeatCoordsAgreeBaseBiplot", 0.5917517),
    ],
)
def test_reproduced_magnitudes(report5, profile, check, expected):
    row = report5.find(profile, check)
    assert row.status is not Status.HOLDS
    assert row.discrepancy == pytest.approx(expected, abs=1e-6)


def test_closed_forms_of_magnitudes(report5):
    # n = 6: each discrepancy is a pure function of n
    n = 6
    assert report5.find("eigen-n", "VarEqualsEigen").discrepancy == pytest.approx(1 / (n - 1), abs=1e-12)
    assert report5.find("gsvd-n", "VarEqualsEigen").discrepancy == pytest.approx(1 / n, abs=1e-12)
    assert report5.find("eigen-gram", "VarEqualsEigen").discrepancy == pytest.approx(1 - 1 / (n - 1), abs=1e-12)
    row = report5.find("biplot/prcomp-style", "SingularValueRelation")
    assert row.discrepancy == pytest.approx(1 - np.sqrt((n - 1) / n), abs=1e-12)
    row = report5.find("biplot/prcomp-style", "ObsCoordsEqualU")
    assert row.discrepancy == pytest.approx(np.sqrt(n / (n - 1)) - 1, abs=1e-12)
    row = report5.find("biplot/ggbiplot-style", "FeatCoordsAgreeBaseBiplot")
    assert row.discrepancy == pytest.approx(1 - 1 / np.sqrt(n), abs=1e-12)


@pytest.mark.parametrize("profile", ["svd-reference", "eigen-reference"])
def test_reference_profiles_hold(report5, profile):
    for check in ("VarEqualsEigen", "SingularValueRelation", "AbsScoreAgreement"):
        row = report5.find(profile, check)
        assert row.status is Status.HOLDS and row.discrepancy is None


def test_reference_biplot_holds(report5):
    for check in ("ObsCoordsEqualU", "FeatCoordsEqualDV", "FeatureLengthEqualsSd", "CosineEqualsCorrelation"):
        assert report5.find("biplot/reference", check).status is Status.HOLDS


def test_rescaled_profile_is_caveat(report5):
    row = report5.find("eigen-rescaled", "VarEqualsEigen")
    assert row.status is Status.HOLDS_WITH_CAVEAT
    assert "sqrt(eigenvalue)" in row.note


def test_caveat_coherence(report5):
    for row in report5.rows:
        if row.status is Status.HOLDS_WITH_CAVEAT:
            assert row.corrected_discrepancy is not None
            assert row.corrected_discrepancy <= report5.tolerance
            assert row.note


def test_every_row_is_consistent(report5):
    for row in report5.rows:
        assert (row.discrepancy is None) == (row.status is Status.HOLDS)
    keys = [(r.profile, r.check.value) for r in report5.rows]
    assert keys == sorted(keys)
    assert len(set(keys)) == len(keys)


def test_row_invariant_enforced():
    with pytest.raises(ValidationError):
        ConformanceRow("p", CheckId.VAR_EQUALS_EIGEN, Status.FAILS, None)
    with pytest.raises(ValidationError):
        ConformanceRow("p", CheckId.VAR_EQUALS_EIGEN, Status.HOLDS, 0.1)


def test_check_ids_unique():
    ids = [c.id for c in CHECKS.values()]
    assert set(ids) == set(CheckId)
    assert len(ids) == len(set(ids))


def test_prcomp_emulation(ex4):
    res = pca_svd(ex4, SVD_REFERENCE)
    s = svd(ex4)
    emul = emulate_biplot_prcomp(res, pc_biplot_flag=False)
    # the emulated quantity is the reference side of each comparison
    assert mean_relative_difference(emul.singular_values, s.singular_values) == pytest.approx(0.08712907, abs=1e-6)
    assert mean_relative_difference(emul.observations, s.u) == pytest.approx(0.09544512, abs=1e-6)
    fixed = emulate_biplot_prcomp(res, corrected=True)
    np.testing.assert_allclose(fixed.observations, s.u, atol=1e-9)
    flagged = emulate_biplot_prcomp(res, pc_biplot_flag=True)
    np.testing.assert_allclose(flagged.singular_values, res.sdev)


def test_ggbiplot_emulation(ex4):
    res = pca_svd(ex4, SVD_REFERENCE)
    gg = emulate_ggbiplot(res)
    np.testing.assert_allclose(gg.observations, res.scores[:, :2] * np.sqrt(5) / np.sqrt(6), atol=1e-9)
    base = emulate_biplot_prcomp(res).features[:, :2]
    assert mean_relative_difference(base, gg.features) == pytest.approx(0.5917517, abs=1e-6)
    with pytest.raises(ValidationError):
        emulate_ggbiplot(res, components=5)


def test_ggbiplot_ratio_vanishes_for_large_n():
    n = 10**6
    rng = np.random.default_rng(11)
    y = rng.normal(size=(n, 2))
    y -= y.mean(axis=0)
    res = pca_svd(DataMatrix(y))
    gg = emulate_ggbiplot(res)
    assert np.max(np.abs(gg.observations - res.scores[:, :2])) <= 1e-3 * np.abs(res.scores).max()
    assert abs(np.sqrt(n - 1) / np.sqrt(n) - 1) < 1e-6


def test_emulations_need_plain_profile(ex4):
    from pcabiplot.pca import pca

    with pytest.raises(ValidationError):
        emulate_biplot_prcomp(pca(ex4, EIGEN_RESCALED))


def test_reference_emulation_equals_biplot(ex4):
    emul = emulate_reference(ex4)
    c = biplot_from_data(ex4, 0.0)
    np.testing.assert_array_equal(emul.observations, c.observations)
    np.testing.assert_array_equal(emul.features, c.features)


def test_render_grid(report5):
    text = render_grid(report5)
    line = next(l for l in text.splitlines() if l.startswith("eigen-n ") and "VarEqualsEigen" in l)
    assert "0.2000000" in line and MARKS[Status.FAILS] in line
    assert "0.1666667" in text and "0.8000000" in text
    assert text == render_grid(report5)


def test_render_single_profile_all_hold(ex4):
    rep = run_conformance(ex4, make_registry([SVD_REFERENCE]), include_biplots=False)
    lines = render_grid(rep).splitlines()[2:]
    assert len(lines) == 3
    assert all(MARKS[Status.HOLDS] in l for l in lines)


def test_render_empty_report_errors():
    with pytest.raises(ValidationError):
        render_grid(ConformanceReport(()))


def test_format_discrepancy():
    assert format_discrepancy(0.2) == "0.2000000"
    assert format_discrepancy(0.166666666) == "0.1666667"
    assert format_discrepancy(None) == ""


def test_run_errors(ex4):
    with pytest.raises(ValidationError):
        run_conformance(ex4, {})
    with pytest.raises(ValidationError):
        run_conformance(ex4, tolerance=0.0)
    with pytest.raises(ValidationError, match="not centered"):
        run_conformance(DataMatrix(ex4.values + 1.0))


def test_json_matches_schema(report5):
    data = json.loads(report5.to_json())
    jsonschema.validate(data, load_schema("conformance"))
    assert {"profile", "check", "status", "discrepancy", "note"} == set(data[0])


def test_determinism(ex4):
    assert render_grid(run_conformance(ex4)) == render_grid(run_conformance(ex4))
    assert run_conformance(ex4).to_json() == run_conformance(ex4).to_json()
