"""Spectral verdicts for the truncated curvature operator.

The checks mirror the structural facts being verified: the spectrum is
nonpositive, the kernel has dimension exactly n (n - 1), the smallest
eigenvalue stays above -16 sqrt(3/pi), and the dyadic block vectors A_i
witness that the operator is not compact (their form values do not sink
below a fixed negative floor as i grows).  Exact integer or rational
arithmetic backs every claim that can be settled without floats.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .wedge_operator import assemble_matrix
from .wp_tensor import TensorCache, compute_block, tensor_entry

OPERATOR_BOUND = 16.0 * math.sqrt(3.0 / math.pi)
EIGEN_TOL = 1e-9
KERNEL_TOL = 1e-7


def verify_nonpositive(eigenvalues: np.ndarray, tol: float = EIGEN_TOL) -> dict:
    """Largest eigenvalue must not exceed tol."""
    top = float(np.max(eigenvalues))
    return {"max_eigenvalue": top, "tolerance": tol, "passed": bool(top <= tol)}


def verify_bound(eigenvalues: np.ndarray) -> dict:
    """|smallest eigenvalue| against the uniform operator norm bound."""
    low = float(np.min(eigenvalues))
    return {
        "abs_min_eigenvalue": abs(low),
        "bound": OPERATOR_BOUND,
        "passed": bool(abs(low) <= OPERATOR_BOUND),
    }


def kernel_dimension(eigenvalues: np.ndarray, n: int, tol: float = KERNEL_TOL) -> dict:
    """Count near-zero eigenvalues and demand a 10x spectral gap below them."""
    eigenvalues = np.sort(np.asarray(eigenvalues, dtype=float))
    near_zero = np.abs(eigenvalues) < tol
    dim = int(np.sum(near_zero))
    expected = n * (n - 1)
    rest = np.abs(eigenvalues[~near_zero])
    gap_ok = bool(rest.size == 0 or np.min(rest) >= 10.0 * tol)
    return {
        "dimension": dim,
        "expected": expected,
        "tolerance": tol,
        "gap_ok": gap_ok,
        "passed": bool(dim == expected and gap_ok),
    }


def holomorphic_sectional_trend(n_max: int = 12, cache: TensorCache | None = None) -> dict:
    """Diagonal curvatures 2 T[n,n,n,n]: positive and strictly decreasing in n."""
    if cache is None:
        cache = TensorCache()
    values = [2.0 * tensor_entry(k, k, k, k, cache) for k in range(1, n_max + 1)]
    positive = bool(all(v > 0 for v in values))
    decreasing = bool(all(a > b for a, b in zip(values, values[1:])))
    return {
        "values": values,
        "positive": positive,
        "strictly_decreasing": decreasing,
        "passed": positive and decreasing,
    }


# ---------------------------------------------------------------------------
# noncompactness evidence


def _cube_sum_exceeds(i: int) -> bool:
    """Exact check of sum_{k=2^i}^{2^{i+1}-1} (k+1)^3 > 3 * 2^{4i}."""
    square_pyramid = lambda m: (m * (m + 1) // 2) ** 2
    total = square_pyramid(2 ** (i + 1)) - square_pyramid(2**i)
    return total > 3 * 2 ** (4 * i)


def cube_sum_threshold(i_max: int = 10) -> dict:
    """Smallest block index whose cube sum clears 3 * 2^{4i} (integers only)."""
    passes = [_cube_sum_exceeds(i) for i in range(i_max + 1)]
    i0 = next((i for i, ok in enumerate(passes) if ok), None)
    return {"i0": i0, "per_block": passes, "all_pass": bool(all(passes))}


def _pair_mass_over_pi(kappa: int, lam: int) -> Fraction:
    """pi * int |mu_kappa|^2 |mu_lambda|^2 dA as an exact fraction."""
    num = 45 * kappa * (kappa + 1) * (kappa + 2) * lam * (lam + 1) * (lam + 2)
    den = 1
    for t in range(kappa + lam - 1, kappa + lam + 6):
        den *= t
    return Fraction(num, den)


def _block_form_value(i: int, j: int, cache: TensorCache) -> float:
    """Q(A_i, A_j) from the mode-0 tensor slice; negative on the diagonal."""
    total = 0.0
    for kappa in range(2**i, 2 ** (i + 1)):
        for lam in range(2**j, 2 ** (j + 1)):
            total += tensor_entry(kappa, kappa, lam, lam, cache)
            total += tensor_entry(kappa, lam, lam, kappa, cache)
    return -4.0 * 2.0 ** (-(i + j) / 2.0) * total


def noncompactness_evidence(
    i_max: int = 4,
    cache: TensorCache | None = None,
    projection_start: int = 2,
) -> dict:
    """Evidence that the operator keeps a uniformly negative direction in every tail.

    Per block: the form value -Q(A_i, A_i), its exact-integral intermediate
    lower bound (4 / (3 * 2^i)) int (sum |mu_k|^2)^2 dA, and the floor
    2^-30.  The last block's intermediate bound is compared exactly against
    135 / (pi 2^35).  A projected matrix on span{A_m, ..., A_{2m-1}} gives
    eigenvalue-level evidence: trace identity, spectrum inside the uniform
    bound, and a count of eigenvalues below -2^-31.
    """
    if cache is None:
        cache = TensorCache()
    floor = 2.0**-30
    per_block = []
    last_intermediate_exact = None
    for i in range(i_max + 1):
        neg_form = -_block_form_value(i, i, cache)
        mass = Fraction(0)
        for kappa in range(2**i, 2 ** (i + 1)):
            for lam in range(2**i, 2 ** (i + 1)):
                mass += _pair_mass_over_pi(kappa, lam)
        intermediate_exact = Fraction(4, 3 * 2**i) * mass  # still divided by pi
        last_intermediate_exact = intermediate_exact
        intermediate = float(intermediate_exact) / math.pi
        per_block.append(
            {
                "i": i,
                "neg_form": neg_form,
                "intermediate_bound": intermediate,
                "above_floor": bool(neg_form >= floor),
                "dominates_intermediate": bool(neg_form >= intermediate - 1e-12),
            }
        )
    # exact comparison: intermediate bound of the largest block vs 135/(pi 2^35);
    # both sides carry 1/pi, so pi cancels and integers decide
    largest_ok = bool(last_intermediate_exact >= Fraction(135, 2**35))

    labels = list(range(projection_start, 2 * projection_start))
    needed = 2 ** (2 * projection_start) - 1
    matrix = np.zeros((len(labels), len(labels)))
    for si, s in enumerate(labels):
        for ti, t in enumerate(labels):
            if ti < si:
                continue
            matrix[si, ti] = matrix[ti, si] = _block_form_value(s, t, cache)
    eigenvalues = np.linalg.eigvalsh(matrix)
    trace_err = abs(float(np.sum(eigenvalues)) - float(np.trace(matrix)))
    within = bool(
        np.all(eigenvalues >= -OPERATOR_BOUND - 1e-9) and np.all(eigenvalues <= 1e-9)
    )
    m = len(labels)
    required = math.isqrt(m)
    count = int(np.sum(eigenvalues <= -(2.0**-31)))
    # the trace argument pins at least floor(sqrt(m)) such eigenvalues only when
    # the remaining ones cannot absorb the trace; B(m) is that breakeven level
    breakeven = (-floor * m + (required - 1) * OPERATOR_BOUND) / (m - required + 1)
    conclusive = bool(breakeven <= -(2.0**-31))
    projection = {
        "start": projection_start,
        "labels": labels,
        "max_label_needed": needed,
        "matrix": matrix.tolist(),
        "eigenvalues": eigenvalues.tolist(),
        "trace_identity_error": trace_err,
        "within_bound": within,
        "count_below_threshold": count,
        "required_count": required,
        "conclusive": conclusive,
    }
    cubes = cube_sum_threshold(max(i_max, 4))
    passed = bool(
        all(b["above_floor"] and b["dominates_intermediate"] for b in per_block)
        and largest_ok
        and cubes["i0"] == 0
        and trace_err <= 1e-8
        and within
        and count >= required
        and conclusive
    )
    return {
        "i_max": i_max,
        "floor": floor,
        "per_block": per_block,
        "largest_block_bound_ok": largest_ok,
        "cube_sum": cubes,
        "projection": projection,
        "passed": passed,
    }


def cauchy_interlace_ok(
    full_eigs: np.ndarray, sub_eigs: np.ndarray, atol: float = 1e-9
) -> bool:
    """Eigenvalues of an orthogonal compression interlace those of the matrix."""
    full = np.sort(np.asarray(full_eigs, dtype=float))
    sub = np.sort(np.asarray(sub_eigs, dtype=float))
    big, small = len(full), len(sub)
    if small > big:
        raise ValueError("compression cannot have more eigenvalues than the matrix")
    for k in range(small):
        if not (full[k] - atol <= sub[k] <= full[k + big - small] + atol):
            return False
    return True


# ---------------------------------------------------------------------------
# report


@dataclass
class SpectralReport:
    """Everything one verification run asserts, in JSON-stable form."""

    config: dict
    tensor_hash: str
    spectra: dict
    verdicts: dict
    timings: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "config": self.config,
            "tensor_hash": self.tensor_hash,
            "spectra": self.spectra,
            "verdicts": self.verdicts,
            "timings": self.timings,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    def save(self, path) -> None:
        with open(path, "w") as fh:
            fh.write(self.to_json() + "\n")

    @property
    def all_passed(self) -> bool:
        return all(v.get("passed", False) for v in self.verdicts.values())


def build_report(
    n: int,
    cache: TensorCache | None = None,
    i_max: int = 4,
    tol_eigen: float = EIGEN_TOL,
    kernel_tol: float = KERNEL_TOL,
    projection_start: int = 2,
    trend_max: int = 12,
    config: dict | None = None,
) -> SpectralReport:
    """Run the whole verification battery at truncation n."""
    timings: dict[str, float] = {}
    t0 = time.perf_counter()
    cache, _ = compute_block(n, cache=cache)
    timings["tensor_block"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    operator = assemble_matrix(n, cache)
    eigenvalues = operator.eigenvalues()
    timings["operator"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    slice_cache = TensorCache()
    noncompact = noncompactness_evidence(i_max, slice_cache, projection_start)
    timings["noncompactness"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    trend = holomorphic_sectional_trend(trend_max, slice_cache)
    timings["trend"] = time.perf_counter() - t0

    verdicts = {
        "nonpositive": verify_nonpositive(eigenvalues, tol_eigen),
        "bound": verify_bound(eigenvalues),
        "kernel_dim": kernel_dimension(eigenvalues, n, kernel_tol),
        "noncompactness": noncompact,
        "trend": trend,
    }
    resolved = {
        "n": n,
        "i_max": i_max,
        "tol_eigen": tol_eigen,
        "kernel_tol": kernel_tol,
        "projection_start": projection_start,
        "trend_max": trend_max,
    }
    if config:
        resolved.update(config)
    spectra = {
        "dimension": len(eigenvalues),
        "eigenvalues": [float(v) for v in eigenvalues],
        "lambda_min": float(np.min(eigenvalues)),
        "lambda_max": float(np.max(eigenvalues)),
    }
    return SpectralReport(resolved, cache.content_hash(), spectra, verdicts, timings)
