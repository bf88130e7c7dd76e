"""Independent brute-force routes used to certify the main pipeline.

Nothing here shares discretization code with the production modules: the
resolvent is re-discretized by finite differences on its own stretched grid,
the quadratic form is evaluated straight from its double-integral expression
with the Green kernel, and the beta-function inequality runs in exact
integer arithmetic.  Slow is fine; independent is the point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
import scipy.integrate
import scipy.sparse
import scipy.sparse.linalg


# ---------------------------------------------------------------------------
# exact rational arithmetic


@dataclass(frozen=True)
class RationalValue:
    """Reduced fraction with arbitrary-precision integer parts."""

    numerator: int
    denominator: int

    def __post_init__(self) -> None:
        if self.denominator == 0:
            raise ZeroDivisionError("rational with zero denominator")
        g = math.gcd(self.numerator, self.denominator)
        num, den = self.numerator // g, self.denominator // g
        if den < 0:
            num, den = -num, -den
        object.__setattr__(self, "numerator", num)
        object.__setattr__(self, "denominator", den)

    def as_fraction(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)

    def __float__(self) -> float:
        return self.numerator / self.denominator


def beta_integral_exact(m: int) -> RationalValue:
    """int_0^1 (1-r)^6 r^m dr = 6! m!/(m+7)! exactly; asserts >= 45/(2^17 m^7).

    The assert runs in integer arithmetic, no floats anywhere.
    """
    if not isinstance(m, (int, np.integer)) or m < 1:
        raise ValueError(f"exponent must be a positive integer, got {m!r}")
    m = int(m)
    den = 1
    for j in range(m + 1, m + 8):
        den *= j
    value = Fraction(720, den)
    bound = Fraction(45, 2**17 * m**7)
    if value < bound:
        raise AssertionError(f"beta inequality fails at m={m}: {value} < {bound}")
    return RationalValue(value.numerator, value.denominator)


# ---------------------------------------------------------------------------
# finite-difference resolvent (independent discretization)
#
# For mode m put a = |m|/2 and substitute u = x^a v(x); then
#   (Delta_rho - 2) u = -2 f  with  f = x^a psi
# becomes the nonsingular problem
#   (1-x)^2 [x v'' + (2a+1) v'] - 2 v = -2 psi,
# which we difference on a uniform grid in s where x = 2s - s^2 (nodes
# crowd toward the boundary x = 1, where the resolvent's decay lives).


def fd_grid(grid_size: int) -> np.ndarray:
    """Radial nodes in x = r**2 for the finite-difference solver."""
    if grid_size < 64:
        raise ValueError("finite-difference grid needs at least 64 intervals")
    s = np.linspace(0.0, 1.0, grid_size + 1)
    return 2.0 * s - s * s


def fd_resolvent(f: np.ndarray, mode: int, grid_size: int) -> np.ndarray:
    """Second-order FD solve of (Delta_rho - 2) u = -2 f for one angular mode.

    `f` holds samples of the input profile on fd_grid(grid_size); the return
    value holds samples of u on the same nodes.
    """
    f = np.asarray(f, dtype=float)
    x = fd_grid(grid_size)
    if f.shape != x.shape:
        raise ValueError(f"expected {x.shape[0]} samples, got {f.shape}")
    a = abs(mode) / 2.0
    s = np.linspace(0.0, 1.0, grid_size + 1)
    h = 1.0 / grid_size

    # psi = f / x^a, extrapolated to the origin when a > 0
    psi = np.empty_like(f)
    if a == 0:
        psi[:] = f
    else:
        psi[1:] = f[1:] / x[1:] ** a
        psi[0] = 3.0 * psi[1] - 3.0 * psi[2] + psi[3]

    n = grid_size + 1
    rows, cols, vals = [], [], []
    rhs = np.empty(n)

    # interior rows: (1-s)^2 x/4 * v_ss-part + [...] * v_s-part - 2 v = -2 psi
    # with v_xx = (v_ss + v_s/(1-s)) / (4 (1-s)^2), v_x = v_s / (2 (1-s))
    for idx in range(1, grid_size):
        si = s[idx]
        xi = x[idx]
        one = 1.0 - si
        c_vss = one**2 * xi / 4.0
        c_vs = one * xi / 4.0 + (2.0 * a + 1.0) * one**3 / 2.0
        lo = c_vss / h**2 - c_vs / (2.0 * h)
        di = -2.0 * c_vss / h**2 - 2.0
        hi = c_vss / h**2 + c_vs / (2.0 * h)
        rows += [idx, idx, idx]
        cols += [idx - 1, idx, idx + 1]
        vals += [lo, di, hi]
        rhs[idx] = -2.0 * psi[idx]

    # origin: (2a+1) v_x(0) - 2 v(0) = -2 psi(0), v_x(0) = v_s(0)/2 one-sided
    cf = (2.0 * a + 1.0) / (4.0 * h)
    rows += [0, 0, 0]
    cols += [0, 1, 2]
    vals += [-3.0 * cf - 2.0, 4.0 * cf, -cf]
    rhs[0] = -2.0 * psi[0]

    # boundary: the equation degenerates to -2 v = -2 psi at s = 1
    rows.append(grid_size)
    cols.append(grid_size)
    vals.append(-2.0)
    rhs[grid_size] = -2.0 * psi[grid_size]

    matrix = scipy.sparse.csr_matrix((vals, (rows, cols)), shape=(n, n))
    try:
        v = scipy.sparse.linalg.spsolve(matrix, rhs)
    except Exception as exc:  # pragma: no cover - singular systems are a bug
        raise RuntimeError(f"finite-difference system could not be solved: {exc}") from exc
    if not np.all(np.isfinite(v)):
        raise RuntimeError("finite-difference system is singular for this mode/grid")

    u = np.empty_like(v)
    if a == 0:
        u[:] = v
    else:
        u[0] = 0.0
        u[1:] = x[1:] ** a * v[1:]
    return u


def fd_self_convergence(
    profile: Callable[[np.ndarray], np.ndarray],
    mode: int,
    sizes: Sequence[int] = (128, 256, 512),
) -> list[float]:
    """Sup-norm differences between successive grid halvings (ratio ~4 expected)."""
    solutions = []
    for size in sizes:
        x = fd_grid(size)
        solutions.append((size, fd_resolvent(profile(x), mode, size)))
    diffs = []
    for (size_c, u_c), (_, u_f) in zip(solutions, solutions[1:]):
        # coarse nodes are a subset of fine nodes when sizes double
        stride = (len(u_f) - 1) // size_c
        diffs.append(float(np.max(np.abs(u_f[::stride] - u_c))))
    return diffs


# ---------------------------------------------------------------------------
# Green kernel, oracle copy


def _q_second_kind(t: np.ndarray) -> np.ndarray:
    return 0.5 * t * np.log((t + 1.0) / (t - 1.0)) - 1.0


@lru_cache(maxsize=1)
def _green_constant() -> float:
    # unit hyperbolic mass: 2*pi*c0*int_1^inf Q1(t) dt = 1
    mass, _ = scipy.integrate.quad(_q_second_kind, 1.0, np.inf, limit=200)
    return 1.0 / (2.0 * math.pi * mass)


def green_value(cosh_d: np.ndarray) -> np.ndarray:
    return _green_constant() * _q_second_kind(cosh_d)


def green_apply(
    profile,
    mode: int,
    r_eval: np.ndarray,
    min_scale: float = 1e-5,
) -> np.ndarray:
    """Apply the smoothing operator by direct kernel convolution.

    For an input phi(s) e^{i m psi} the output radial profile at radius r is
      u(r) = int_0^1 phi(s) rho(s) s [ int_0^{2pi} G(d(r, s, psi)) cos(m psi)
      dpsi ] ds,
    the sine part cancelling by symmetry.  Quadrature panels shrink
    geometrically toward the kernel's logarithmic singularity at (s, psi) =
    (r, 0).  A third route to the same operator as the recursion solver and
    the finite differences, sharing no code with either.
    """
    r_eval = np.atleast_1d(np.asarray(r_eval, dtype=float))
    out = np.empty_like(r_eval)
    psi, psi_w = _angle_grid(min_scale)
    cos_m = np.cos(mode * psi)
    for pos, r in enumerate(r_eval):
        s, s_w = _radial_grid(float(r), min_scale)
        cosh_d = 1.0 + 2.0 * (
            r**2 + s[:, None] ** 2 - 2.0 * r * s[:, None] * np.cos(psi)[None, :]
        ) / ((1.0 - r**2) * (1.0 - s[:, None] ** 2))
        kernel = green_value(cosh_d)
        angular = kernel @ (psi_w * cos_m)
        rho_s = 4.0 / (1.0 - s**2) ** 2
        out[pos] = float(np.dot(s_w, profile(s) * rho_s * s * angular))
    return out


# ---------------------------------------------------------------------------
# direct evaluation of the quadratic form
#
# Q(V,V) = II G(z,w) * [ -4 Im S(z) Im S(w) - 2 |K(z,w)|^2
#                        + 2 Re( K(z,w) K(w,z) ) ] dA(w) dA(z),
# K(z,w) = sum_ij kappa_ij mu_i(w) conj(mu_j(z)),  kappa = d_upper + i b,
# S(z) = K(z,z).  The D-term of the quadratic form is folded into the double
# integral through D(g)(z) = int G(z,w) g(w) dA(w).


def _amplitude(label: int) -> float:
    n = label + 1
    return 0.25 * math.sqrt((2.0 * n**3 - 2.0 * n) / math.pi)


def _panels(edges: np.ndarray, per_panel: int) -> tuple[np.ndarray, np.ndarray]:
    t, w = np.polynomial.legendre.leggauss(per_panel)
    nodes, weights = [], []
    for a, b in zip(edges, edges[1:]):
        mid, half = 0.5 * (a + b), 0.5 * (b - a)
        nodes.append(mid + half * t)
        weights.append(half * w)
    return np.concatenate(nodes), np.concatenate(weights)


def _graded_edges(lo: float, hi: float, scale: float) -> np.ndarray:
    """Panel edges on [lo, hi] shrinking geometrically toward lo."""
    edges = [hi]
    width = hi - lo
    while width > scale:
        width *= 0.5
        edges.append(lo + width)
    edges.append(lo)
    return np.array(sorted(edges))


def _angle_grid(min_scale: float, per_panel: int = 10) -> tuple[np.ndarray, np.ndarray]:
    half = _graded_edges(0.0, math.pi, min_scale)
    nodes_lo, weights_lo = _panels(half, per_panel)
    # mirror onto (pi, 2 pi): the kernel is symmetric about phi = pi
    nodes = np.concatenate([nodes_lo, 2.0 * math.pi - nodes_lo])
    weights = np.concatenate([weights_lo, weights_lo])
    return nodes, weights


def _radial_grid(r: float, min_scale: float, per_panel: int = 10) -> tuple[np.ndarray, np.ndarray]:
    # panels on [0, r] refine toward r, panels on [r, 1] refine toward r
    if r > min_scale:
        left_edges = np.sort(r - _graded_edges(0.0, r, min_scale))
    else:
        left_edges = np.array([0.0, r])
    left_nodes, left_w = _panels(left_edges, per_panel)
    if 1.0 - r > min_scale:
        right_edges = _graded_edges(r, 1.0, min_scale)
    else:
        right_edges = np.array([r, 1.0])
    right_nodes, right_w = _panels(right_edges, per_panel)
    return np.concatenate([left_nodes, right_nodes]), np.concatenate([left_w, right_w])


def _form_value(
    kappa: np.ndarray,
    powers: np.ndarray,
    r_nodes: np.ndarray,
    r_weights: np.ndarray,
    min_scale: float,
) -> float:
    labels = np.arange(1, kappa.shape[0] + 1)
    amps = np.array([_amplitude(int(i)) for i in labels])
    pairs = [(i, j) for i in range(kappa.shape[0]) for j in range(kappa.shape[1]) if kappa[i, j] != 0]
    p_max = int(powers.max()) if len(powers) else 0
    n_theta = 4 * p_max + 4
    theta = np.linspace(0.0, 2.0 * math.pi, n_theta, endpoint=False)

    def radial(s: np.ndarray) -> np.ndarray:
        # rows: label, cols: node
        return amps[:, None] * s[None, :] ** powers[:, None] * (1.0 - s[None, :] ** 2) ** 2

    total = 0.0
    phi, phi_w = _angle_grid(min_scale)
    for r, wr in zip(r_nodes, r_weights):
        s, s_w = _radial_grid(r, min_scale)
        rad_s = radial(s)  # (labels, S)
        rad_r = radial(np.array([r]))[:, 0]  # (labels,)

        # angles: z at theta, w at theta + phi
        ang_w = theta[None, :] + phi[:, None]  # (P, T)
        k_zw = np.zeros((len(s), len(phi), n_theta), dtype=complex)
        k_wz = np.zeros_like(k_zw)
        s_z = np.zeros(n_theta, dtype=complex)
        s_w_diag = np.zeros((len(s), len(phi), n_theta), dtype=complex)
        for i, j in pairs:
            c = kappa[i, j]
            pi_, pj = powers[i], powers[j]
            # K(z,w): mu_i at w, conj(mu_j) at z
            k_zw += c * (
                rad_s[i][:, None, None]
                * np.exp(-1j * pi_ * ang_w)[None, :, :]
                * (rad_r[j] * np.exp(1j * pj * theta))[None, None, :]
            )
            # K(w,z): mu_i at z, conj(mu_j) at w
            k_wz += c * (
                (rad_r[i] * np.exp(-1j * pi_ * theta))[None, None, :]
                * rad_s[j][:, None, None]
                * np.exp(1j * pj * ang_w)[None, :, :]
            )
            s_z += c * rad_r[i] * rad_r[j] * np.exp(1j * (pj - pi_) * theta)
            s_w_diag += c * (rad_s[i] * rad_s[j])[:, None, None] * np.exp(
                1j * (pj - pi_) * ang_w
            )[None, :, :]

        integrand = (
            -4.0 * s_z.imag[None, None, :] * s_w_diag.imag
            - 2.0 * np.abs(k_zw) ** 2
            + 2.0 * (k_zw * k_wz).real
        )
        psi = integrand.mean(axis=2)  # exact average over theta

        cosh_d = 1.0 + 2.0 * (
            r**2 + s[:, None] ** 2 - 2.0 * r * s[:, None] * np.cos(phi)[None, :]
        ) / ((1.0 - r**2) * (1.0 - s[:, None] ** 2))
        kernel = green_value(cosh_d)

        rho_s = 4.0 / (1.0 - s**2) ** 2
        inner = np.dot(phi_w, np.einsum("sp,s->p", kernel * psi, rho_s * s * s_w))
        total += wr * (4.0 / (1.0 - r**2) ** 2) * r * inner
    return 2.0 * math.pi * total


def direct_quadratic_form(vector, tol: float = 5e-7) -> float:
    """Evaluate the curvature quadratic form by nested double quadrature.

    `vector` is a wedge vector (truncation n, blocks a, b, c); intended for
    n <= 3.  The graded panel scale around the kernel singularity is halved
    until two successive answers agree to `tol`; failure to settle raises.
    """
    n = vector.n
    if n > 3:
        raise ValueError("direct evaluation is meant for truncations n <= 3")
    d_upper = np.zeros((n, n))
    pair = 0
    for i in range(n):
        for j in range(i + 1, n):
            d_upper[i, j] = vector.a[pair] + vector.c[pair]
            pair += 1
    kappa = d_upper + 1j * np.asarray(vector.b, dtype=float)
    if not np.any(kappa):
        return 0.0
    powers = np.arange(n)

    r_t, r_w = np.polynomial.legendre.leggauss(40)
    r_nodes = 0.5 * (1.0 + r_t)
    r_weights = 0.5 * r_w

    previous = None
    scale = 0.02
    for _ in range(4):
        value = _form_value(kappa, powers, r_nodes, r_weights, scale)
        if previous is not None and abs(value - previous) <= tol * max(1.0, abs(value)):
            return value
        previous = value
        scale *= 0.5
    raise RuntimeError(
        "double quadrature did not settle near the kernel singularity "
        f"(last increment {abs(value - previous):.3e})"
    )
