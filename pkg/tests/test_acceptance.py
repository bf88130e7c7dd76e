"""Acceptance gate: one test per verified property, each printing a verdict line.

Every test states its tolerance inline and checks its own runtime against the
budget it is allowed.  Run with `pytest -s tests/test_acceptance.py` to see the
per-criterion lines.
"""

import math
import time
from contextlib import contextmanager
from fractions import Fraction

import numpy as np
import pytest

from wpcurv.hyperbolic_disk import (
    HarmonicForm,
    SeparableFunction,
    from_label,
    gram_matrix,
    integrate_da_product,
    sup_norm,
)
from wpcurv.oracle import (
    beta_integral_exact,
    direct_quadratic_form,
    fd_grid,
    fd_resolvent,
    green_apply,
)
from wpcurv.resolvent import apply_D, check_contraction, default_green_kernel
from wpcurv.spectral_analysis import (
    OPERATOR_BOUND,
    holomorphic_sectional_trend,
    kernel_dimension,
    noncompactness_evidence,
)
from wpcurv.wedge_operator import (
    WedgeVector,
    assemble_matrix,
    form_of_vector,
    j_action,
)
from wpcurv.wp_tensor import compute_block


@contextmanager
def criterion(index, slug, budget=None):
    start = time.perf_counter()
    ok = False
    try:
        yield
        elapsed = time.perf_counter() - start
        if budget is not None and elapsed >= budget:
            raise AssertionError(f"took {elapsed:.2f}s, budget is {budget}s")
        ok = True
    finally:
        elapsed = time.perf_counter() - start
        status = "PASS" if ok else "FAIL"
        print(f"criterion {index:02d} {slug}: {status} ({elapsed:.2f}s)", flush=True)


def _random_form(rng, n_labels=6, n_terms=3):
    labels = rng.choice(np.arange(1, n_labels + 1), size=n_terms, replace=False)
    coeffs = rng.normal(size=n_terms) + 1j * rng.normal(size=n_terms)
    return HarmonicForm.from_dict(
        {int(k): complex(c) for k, c in zip(labels, coeffs)}
    )


def _random_density(rng):
    left = SeparableFunction.from_form(_random_form(rng))
    right = SeparableFunction.from_form(_random_form(rng))
    return left * right.conjugate()


def _random_wedge(rng, n):
    pairs = n * (n - 1) // 2
    v = WedgeVector(
        n,
        rng.normal(size=pairs),
        rng.normal(size=(n, n)),
        rng.normal(size=pairs),
    )
    return (1.0 / v.norm_eu()) * v


@pytest.fixture(scope="module")
def eigs_by_n(cache4):
    return {n: assemble_matrix(n, cache4).eigenvalues() for n in (2, 3, 4)}


def test_criterion_01_gram_identity():
    with criterion(1, "gram-identity", budget=1.0):
        gram = gram_matrix(range(2, 14))
        np.testing.assert_allclose(gram, np.eye(12), atol=1e-10)


def test_criterion_02_resolvent_identities():
    with criterion(2, "resolvent-identities", budget=30.0):
        flat = apply_D(SeparableFunction.constant(1.0))
        samples = flat.values_at(np.linspace(0.0, 0.99, 40), np.array([0.0]))
        np.testing.assert_allclose(samples.real, 1.0, atol=1e-10)
        np.testing.assert_allclose(samples.imag, 0.0, atol=1e-10)

        mass = default_green_kernel().unit_mass()
        assert abs(mass - 1.0) <= 1e-8

        rng = np.random.default_rng(202)
        for _ in range(50):
            f = _random_density(rng)
            g = _random_density(rng)
            left = integrate_da_product(apply_D(f), g, conjugate_second=True)
            right = integrate_da_product(f, apply_D(g), conjugate_second=True)
            assert abs(left - right) <= 1e-8


def test_criterion_03_contraction_and_lower_bound():
    with criterion(3, "contraction-lower-bound", budget=120.0):
        rng = np.random.default_rng(303)
        for _ in range(100):
            lhs, rhs = check_contraction(_random_density(rng))
            assert lhs >= -1e-9
            assert lhs <= rhs + 1e-9

        x = np.linspace(0.0, 1.0, 50, endpoint=False)
        theta = np.linspace(0.0, 2.0 * math.pi, 20, endpoint=False)
        for _ in range(20):
            mu = _random_form(rng)
            density = SeparableFunction.from_form(mu, x)
            density = density * density.conjugate()
            image = apply_D(density)
            gap = image.values_at(x, theta).real - density.values_at(x, theta).real / 3.0
            assert float(gap.min()) >= -1e-8


def test_criterion_04_harnack_bound():
    with criterion(4, "harnack-bound", budget=10.0):
        bound = math.sqrt(3.0 / (4.0 * math.pi))
        rng = np.random.default_rng(404)
        for _ in range(100):
            mu = _random_form(rng, n_labels=8, n_terms=4)
            assert sup_norm(mu) <= bound * mu.coefficient_norm() + 1e-10
        peak = sup_norm(HarmonicForm.unit(1))
        assert abs(peak - bound) <= 1e-10


def test_criterion_05_nonpositive_spectrum():
    with criterion(5, "nonpositive-spectrum", budget=600.0):
        cache, _ = compute_block(4)
        for n in (2, 3, 4):
            eigenvalues = assemble_matrix(n, cache).eigenvalues()
            assert float(np.max(eigenvalues)) <= 1e-9


def test_criterion_06_kernel_dimension(eigs_by_n, cache4):
    with criterion(6, "kernel-dimension"):
        for n in (2, 3, 4):
            verdict = kernel_dimension(eigs_by_n[n], n, tol=1e-7)
            assert verdict["passed"], verdict
        rng = np.random.default_rng(606)
        for _ in range(10):
            e = _random_wedge(rng, 3)
            anti = e - j_action(e)
            assert abs(form_of_vector(anti, cache4)) <= 1e-8


def test_criterion_07_uniform_bound(eigs_by_n):
    with criterion(7, "uniform-bound"):
        smallest = {n: abs(float(np.min(eigs_by_n[n]))) for n in (2, 3, 4)}
        for n in (2, 3, 4):
            assert smallest[n] <= OPERATOR_BOUND
        assert smallest[2] <= smallest[3] + 1e-10
        assert smallest[3] <= smallest[4] + 1e-10


def test_criterion_08_noncompactness_evidence():
    with criterion(8, "noncompactness-evidence", budget=900.0):
        evidence = noncompactness_evidence(i_max=4, projection_start=2)
        for block in evidence["per_block"]:
            assert block["neg_form"] >= 2.0**-30
        assert evidence["largest_block_bound_ok"]
        last = evidence["per_block"][-1]
        assert last["neg_form"] >= 135.0 / (math.pi * 2.0**35) - 1e-12

        projection = evidence["projection"]
        eigenvalues = np.asarray(projection["eigenvalues"])
        diagonal = {b["i"]: -b["neg_form"] for b in evidence["per_block"]}
        trace = sum(diagonal[i] for i in projection["labels"])
        assert abs(float(np.sum(eigenvalues)) - trace) <= 1e-8
        assert np.all(eigenvalues >= -OPERATOR_BOUND - 1e-9)
        assert np.all(eigenvalues <= 1e-9)


def test_criterion_09_exact_arithmetic():
    with criterion(9, "exact-arithmetic", budget=1.0):
        for m in range(1, 1001):
            value = beta_integral_exact(m).as_fraction()
            assert value >= Fraction(45, 2**17 * m**7)


def test_criterion_10_oracle_equivalence(cache4):
    with criterion(10, "oracle-equivalence"):
        size = 1024
        x = fd_grid(size)
        node_ids = [128, 320, 576, 832]
        radii = np.sqrt(x[node_ids])
        products = [
            (1, 1), (2, 1), (2, 2), (3, 1), (3, 2),
            (3, 3), (4, 2), (4, 4), (1, 2), (4, 1),
        ]
        for i, j in products:
            density = SeparableFunction.from_basis_product(i, j, x)
            f = density.values_at(x, np.array([0.0]))[:, 0].real
            mode = from_label(j).p - from_label(i).p
            u_main = apply_D(density).values_at(x, np.array([0.0]))[:, 0].real
            u_fd = fd_resolvent(f, mode, size)
            assert float(np.max(np.abs(u_fd - u_main))) <= 1e-6

            amp = from_label(i).amplitude * from_label(j).amplitude
            power = from_label(i).p + from_label(j).p
            u_green = green_apply(
                lambda s: amp * (1.0 - s**2) ** 4 * s**power, mode, radii
            )
            assert float(np.max(np.abs(u_green - u_main[node_ids]))) <= 1e-6
            assert float(np.max(np.abs(u_green - u_fd[node_ids]))) <= 1e-6

        rng = np.random.default_rng(1010)
        for n in (2, 3):
            for _ in range(10):
                v = _random_wedge(rng, n)
                direct = direct_quadratic_form(v)
                assert abs(direct - form_of_vector(v, cache4)) <= 1e-6


def test_criterion_11_trend_evidence():
    with criterion(11, "trend-evidence"):
        trend = holomorphic_sectional_trend(n_max=12)
        values = trend["values"]
        assert all(v > 0 for v in values)
        assert all(a > b for a, b in zip(values, values[1:]))
        np.testing.assert_allclose(values[0], 11.0 / (30.0 * math.pi), rtol=1e-12)
