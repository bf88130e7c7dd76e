"""Walk through the harmonic basis and the disk quadrature it rests on.

The forms mu_n = a_n (1 - |z|^2)^2 zbar^{n-1} are orthonormal for the
Petersson pairing on the Poincare disk.  Everything downstream (tensor
entries, operator matrices, spectra) reduces to integrals of products of
these forms, so this script starts where the package starts: checking
that the basis really is orthonormal and that the Gauss-Jacobi rules
integrate the relevant densities exactly.
"""

import math

import numpy as np

from wpcurv.hyperbolic_disk import (
    HarmonicForm,
    from_label,
    gram_matrix,
    integrate_da,
    SeparableFunction,
    sup_norm,
)
from wpcurv.oracle import beta_integral_exact


def main() -> None:
    print("= amplitudes =")
    for label in (1, 2, 3, 5, 8):
        element = from_label(label)
        print(f"  mu_{label}: decay power p = {element.p}, amplitude = {element.amplitude:.12f}")
    print(f"  closed form for mu_1: sqrt(3/(4 pi)) = {math.sqrt(3.0 / (4.0 * math.pi)):.12f}")

    print("\n= orthonormality =")
    labels = range(1, 17)
    gram = gram_matrix(labels)
    off = gram - np.eye(len(gram))
    print(f"  Gram matrix of mu_1..mu_16: max deviation from identity = {np.abs(off).max():.3e}")

    print("\n= quadrature exactness =")
    # |mu_1|^2 |mu_{m+1}|^2 = a_1^2 a_{m+1}^2 (1-x)^8 x^m, and integrating
    # h(x) over the disk against hyperbolic area equals
    # 4 pi int_0^1 h(x) (1-x)^{-2} dx, so the integral has the exact value
    # a_1^2 a_{m+1}^2 4 pi B(m) with B(m) = int_0^1 (1-x)^6 x^m dx rational.
    for m in (1, 5, 20, 60):
        density = SeparableFunction.from_basis_product(
            1, 1
        ) * SeparableFunction.from_basis_product(m + 1, m + 1)
        moment = integrate_da(density).real
        amp_sq = from_label(1).amplitude ** 2 * from_label(m + 1).amplitude ** 2
        exact = amp_sq * 4.0 * math.pi * float(beta_integral_exact(m).as_fraction())
        print(
            f"  m={m:3d}: quadrature {moment:.15e}, exact {exact:.15e}, "
            f"diff {abs(moment - exact):.2e}"
        )

    print("\n= pointwise size =")
    peak = sup_norm(HarmonicForm.unit(1))
    print(f"  sup |mu_1| = {peak:.12f} (the uniform bound for unit-norm forms)")
    combo = HarmonicForm.from_dict({1: 0.6, 3: 0.8j})
    print(f"  sup |0.6 mu_1 + 0.8i mu_3| = {sup_norm(combo):.12f} <= {peak:.12f}")


if __name__ == "__main__":
    main()
