import json
import math
from fractions import Fraction

import numpy as np
import pytest

from wpcurv.hyperbolic_disk import SeparableFunction, integrate_da
from wpcurv.spectral_analysis import (
    OPERATOR_BOUND,
    SpectralReport,
    _block_form_value,
    _pair_mass_over_pi,
    build_report,
    cauchy_interlace_ok,
    cube_sum_threshold,
    holomorphic_sectional_trend,
    kernel_dimension,
    noncompactness_evidence,
    verify_bound,
    verify_nonpositive,
)
from wpcurv.wedge_operator import a_vector, assemble_matrix, form_of_vector


def test_verify_nonpositive_accepts_and_rejects():
    good = verify_nonpositive(np.array([-0.5, -0.1, 4e-10]), tol=1e-9)
    assert good["passed"] and good["max_eigenvalue"] == pytest.approx(4e-10)
    bad = verify_nonpositive(np.array([-0.5, 1e-6]), tol=1e-9)
    assert not bad["passed"]


def test_verify_bound_accepts_and_rejects():
    inside = verify_bound(np.array([-15.0, -0.2]))
    assert inside["passed"]
    assert inside["bound"] == pytest.approx(16.0 * math.sqrt(3.0 / math.pi))
    outside = verify_bound(np.array([-OPERATOR_BOUND - 0.01, -0.2]))
    assert not outside["passed"]


def test_kernel_dimension_counts_and_gap():
    eigs = np.array([-0.6, -0.3, 0.0, 1e-9, -1e-9, 2e-8, 0.0, 0.0])
    result = kernel_dimension(eigs, n=3, tol=1e-7)
    assert result["dimension"] == 6 and result["expected"] == 6
    assert result["gap_ok"] and result["passed"]

    wrong_count = kernel_dimension(np.array([-0.5, 0.0, 0.0]), n=3, tol=1e-7)
    assert wrong_count["dimension"] == 2 and not wrong_count["passed"]

    # an eigenvalue in the dead zone between tol and 10 tol spoils the gap
    smeared = kernel_dimension(np.array([-0.5, -5e-7, 0.0] + [0.0] * 5), n=3, tol=1e-7)
    assert smeared["dimension"] == 6
    assert not smeared["gap_ok"] and not smeared["passed"]


def test_trend_starts_at_known_value():
    trend = holomorphic_sectional_trend(n_max=12)
    assert trend["passed"] and trend["positive"] and trend["strictly_decreasing"]
    np.testing.assert_allclose(trend["values"][0], 11.0 / (30.0 * math.pi), rtol=1e-12)
    assert len(trend["values"]) == 12


def test_cube_sum_threshold_is_immediate():
    cubes = cube_sum_threshold(10)
    assert cubes["i0"] == 0
    assert cubes["all_pass"]
    # first block by hand: only k = 1 contributes, (1+1)^3 = 8 > 3
    assert cubes["per_block"][0] is True


@pytest.mark.parametrize("kappa,lam", [(1, 1), (1, 2), (2, 3), (4, 7)])
def test_pair_mass_matches_quadrature(kappa, lam):
    density = SeparableFunction.from_basis_product(
        kappa, kappa
    ) * SeparableFunction.from_basis_product(lam, lam)
    numeric = math.pi * integrate_da(density).real
    exact = _pair_mass_over_pi(kappa, lam)
    np.testing.assert_allclose(numeric, float(exact), rtol=1e-12)


def test_pair_mass_smallest_case_by_hand():
    # kappa = lam = 1: 45 * 6 * 6 / (1*2*3*4*5*6*7) = 2025/5040 = 27/56... reduced
    assert _pair_mass_over_pi(1, 1) == Fraction(45 * 36, 5040)


def test_block_form_matches_wedge_route(cache3):
    for i in (0, 1):
        vec = a_vector(i, 3)
        np.testing.assert_allclose(
            form_of_vector(vec, cache3),
            _block_form_value(i, i, cache3),
            rtol=1e-12,
        )


def test_noncompactness_evidence_passes():
    evidence = noncompactness_evidence(i_max=4)
    assert evidence["passed"]
    first = evidence["per_block"][0]
    np.testing.assert_allclose(first["neg_form"], 22.0 / (15.0 * math.pi), rtol=1e-12)
    for block in evidence["per_block"]:
        assert block["above_floor"]
        assert block["dominates_intermediate"]
        assert block["neg_form"] >= block["intermediate_bound"] - 1e-12
    assert evidence["largest_block_bound_ok"]
    assert evidence["cube_sum"]["i0"] == 0
    projection = evidence["projection"]
    assert projection["labels"] == [2, 3]
    assert projection["trace_identity_error"] <= 1e-8
    assert projection["within_bound"]
    assert projection["count_below_threshold"] >= projection["required_count"]
    assert projection["conclusive"]


def test_interlacing_of_dyadic_compression(cache8):
    operator = assemble_matrix(8, cache8)
    full_eigs = operator.eigenvalues()
    columns = [a_vector(i, 8).to_array() for i in range(3)]
    basis = np.column_stack(columns)
    np.testing.assert_allclose(basis.T @ basis, np.eye(3), atol=1e-14)
    compressed = basis.T @ operator.matrix @ basis
    sub_eigs = np.linalg.eigvalsh(compressed)
    assert cauchy_interlace_ok(full_eigs, sub_eigs)


def test_interlacing_rejects_violations():
    full = np.array([-1.0, -0.5, 0.0, 0.0])
    assert cauchy_interlace_ok(full, np.array([-0.8, 0.0]))
    assert not cauchy_interlace_ok(full, np.array([-2.0, 0.0]))
    assert not cauchy_interlace_ok(full, np.array([-0.8, 0.5]))
    with pytest.raises(ValueError):
        cauchy_interlace_ok(np.array([0.0]), np.array([0.0, 0.0]))


def test_report_is_deterministic(cache3):
    first = build_report(3, cache=cache3)
    second = build_report(3, cache=cache3)
    a = first.to_dict()
    b = second.to_dict()
    a.pop("timings")
    b.pop("timings")
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)


def test_report_round_trip_and_verdicts(tmp_path, cache3):
    report = build_report(3, cache=cache3, config={"source": "test"})
    assert report.all_passed
    assert set(report.verdicts) == {
        "nonpositive",
        "bound",
        "kernel_dim",
        "noncompactness",
        "trend",
    }
    assert report.spectra["dimension"] == 15
    assert report.verdicts["kernel_dim"]["dimension"] == 6
    path = tmp_path / "report.json"
    report.save(path)
    loaded = json.loads(path.read_text())
    assert loaded["config"]["source"] == "test"
    assert loaded["spectra"]["lambda_max"] <= 1e-9
    assert loaded["tensor_hash"] == report.tensor_hash


def test_all_passed_reflects_verdicts():
    report = SpectralReport(
        config={},
        tensor_hash="x",
        spectra={},
        verdicts={"a": {"passed": True}, "b": {"passed": False}},
    )
    assert not report.all_passed
