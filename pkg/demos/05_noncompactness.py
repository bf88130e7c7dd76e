"""Dyadic block vectors and the evidence that the operator is not compact.

A compact nonpositive operator would push every orthonormal sequence's form
values to zero.  The unit bivectors A_i = 2^{-i/2} sum_{k in block i}
x_k ^ y_k over dyadic label blocks do the opposite: their curvature values
stay below a fixed negative floor.  The chain of bounds behind that claim
mixes floating-point evaluation with exact integer arithmetic, and this
script prints every link.
"""

import math
from fractions import Fraction

import numpy as np

from wpcurv.spectral_analysis import (
    cauchy_interlace_ok,
    cube_sum_threshold,
    noncompactness_evidence,
)
from wpcurv.wedge_operator import a_vector, assemble_matrix, form_of_vector
from wpcurv.wp_tensor import compute_block


def main() -> None:
    print("= block form values =")
    evidence = noncompactness_evidence(i_max=4)
    floor = evidence["floor"]
    print(f"  floor 2^-30 = {floor:.3e}")
    for block in evidence["per_block"]:
        print(
            f"  i={block['i']}: -Q(A_i, A_i) = {block['neg_form']:.6f}, "
            f"exact intermediate bound {block['intermediate_bound']:.6f}"
        )
    print(f"  first block closed form 22/(15 pi) = {22.0 / (15.0 * math.pi):.6f}")

    print("\n= exact arithmetic links =")
    print(
        "  largest block beats 135/(pi 2^35): "
        f"{evidence['largest_block_bound_ok']} (pi cancels, integers decide)"
    )
    cubes = cube_sum_threshold(6)
    print(f"  cube-sum inequality holds from block i0 = {cubes['i0']} on: {cubes['per_block']}")
    print(f"  135/2^35 as a fraction: {Fraction(135, 2**35)}")

    print("\n= projected operator =")
    projection = evidence["projection"]
    eigenvalues = projection["eigenvalues"]
    print(f"  blocks {projection['labels']} need labels up to {projection['max_label_needed']}")
    print(f"  eigenvalues: {[round(v, 6) for v in eigenvalues]}")
    print(f"  count below -2^-31: {projection['count_below_threshold']}"
          f" (required: {projection['required_count']})")
    print(f"  spectrum inside [-16 sqrt(3/pi), 0]: {projection['within_bound']}")

    print("\n= interlacing check against a full matrix =")
    cache, _ = compute_block(3)
    operator = assemble_matrix(3, cache)
    basis = np.column_stack([a_vector(i, 3).to_array() for i in (0, 1)])
    compressed = basis.T @ operator.matrix @ basis
    sub = np.linalg.eigvalsh(compressed)
    full = operator.eigenvalues()
    print(f"  compression eigenvalues: {[round(float(v), 6) for v in sub]}")
    print(f"  interlace the 15 full eigenvalues: {cauchy_interlace_ok(full, sub)}")
    for i in (0, 1):
        value = form_of_vector(a_vector(i, 3), cache)
        print(f"  Q(A_{i}, A_{i}) recomputed through the wedge route: {value:.6f}")


if __name__ == "__main__":
    main()
