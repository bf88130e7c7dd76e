"""Three independent routes to the smoothing operator D = -2 (laplacian - 2)^{-1}.

Route one solves the radial ODE per angular mode with an exact polynomial
recursion.  Route two discretizes the same equation by finite differences on
a graded grid.  Route three convolves against the distance-dependent Green
kernel by brute-force quadrature.  The routes share no code, so their
agreement is the strongest internal evidence that the operator is applied
correctly.  The script finishes with the two operator inequalities that feed
the curvature bounds: the contraction property and the 1/3 lower bound.
"""

import numpy as np

from wpcurv.hyperbolic_disk import HarmonicForm, SeparableFunction, from_label
from wpcurv.oracle import fd_grid, fd_resolvent, green_apply
from wpcurv.resolvent import apply_D, check_contraction, check_lower_bound, default_green_kernel


def main() -> None:
    print("= the kernel itself =")
    kernel = default_green_kernel()
    print(f"  normalization constant: {kernel.normalization:.12f} (1/pi = {1.0 / np.pi:.12f})")
    print(f"  hyperbolic unit mass: {kernel.unit_mass():.12f}")

    print("\n= constants are fixed points =")
    flat = apply_D(SeparableFunction.constant(1.0))
    values = flat.values_at(np.linspace(0.0, 0.99, 25), np.array([0.0])).real
    print(f"  max |D(1) - 1| on a radial sample: {np.abs(values - 1.0).max():.3e}")

    print("\n= route comparison on mu_3 conj(mu_2) =")
    size = 1024
    x = fd_grid(size)
    density = SeparableFunction.from_basis_product(3, 2, x)
    samples = density.values_at(x, np.array([0.0]))[:, 0].real
    mode = from_label(2).p - from_label(3).p

    u_ode = apply_D(density).values_at(x, np.array([0.0]))[:, 0].real
    u_fd = fd_resolvent(samples, mode, size)
    print(f"  ODE recursion vs finite differences: sup diff = {np.abs(u_ode - u_fd).max():.3e}")

    radii = np.sqrt(x[[128, 512, 896]])
    amp = from_label(3).amplitude * from_label(2).amplitude
    u_green = green_apply(lambda s: amp * (1.0 - s**2) ** 4 * s**3, mode, radii)
    picks = u_ode[[128, 512, 896]]
    print(f"  ODE recursion vs Green convolution: sup diff = {np.abs(u_green - picks).max():.3e}")

    print("\n= operator inequalities =")
    rng = np.random.default_rng(11)
    labels = rng.choice(np.arange(1, 7), size=3, replace=False)
    coeffs = rng.normal(size=3) + 1j * rng.normal(size=3)
    mu = HarmonicForm.from_dict({int(k): complex(c) for k, c in zip(labels, coeffs)})
    f = SeparableFunction.from_form(mu)
    f = f * f.conjugate()
    lhs, rhs = check_contraction(f)
    print(f"  <Df, conj f> = {lhs:.6f} <= <f, conj f> = {rhs:.6f}")
    ratio = check_lower_bound(mu)
    print(f"  min D(|mu|^2) / |mu|^2 over a sample grid: {ratio:.6f} (must stay above 1/3)")


if __name__ == "__main__":
    main()
