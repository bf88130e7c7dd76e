"""Geometry of the Poincare disk and the orthonormal basis of harmonic Beltrami forms.

Everything radial is written in the variable x = r**2.  The hyperbolic area
element is dA = rho |dz|^2 with rho = 4/(1-|z|^2)^2, so for a function
h(x) e^{i m theta} the area integral collapses to

    int_D h e^{i m theta} dA = (0 if m != 0 else 4*pi * int_0^1 h(x) (1-x)^-2 dx).

All integrands produced by basis elements are polynomials in x times a power
of (1-x), which Gauss-Jacobi rules in x integrate exactly.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy.special import roots_jacobi

SUP_OVER_WP_BOUND = math.sqrt(3.0 / (4.0 * math.pi))

DEFAULT_RULE_ORDER = 96


# ---------------------------------------------------------------------------
# basis elements


@dataclass(frozen=True)
class BasisElement:
    """One orthonormal harmonic Beltrami form: amplitude * (1-|z|^2)^2 * zbar**p."""

    n: int
    p: int
    amplitude: float

    def radial_profile(self, x: np.ndarray) -> np.ndarray:
        """|element| along a radius, as a function of x = r**2."""
        x = np.asarray(x, dtype=float)
        return self.amplitude * x ** (self.p / 2.0) * (1.0 - x) ** 2


def basis_element(n: int) -> BasisElement:
    """Basis form with index n >= 2: power p = n-2, amplitude (1/4)sqrt((2n^3-2n)/pi)."""
    if not isinstance(n, (int, np.integer)) or n < 2:
        raise ValueError(f"basis index must be an integer >= 2, got {n!r}")
    n = int(n)
    amp = 0.25 * math.sqrt((2.0 * n**3 - 2.0 * n) / math.pi)
    return BasisElement(n=n, p=n - 2, amplitude=amp)


def from_label(i: int) -> BasisElement:
    """Basis form by 1-based label i (power p = i-1); label i is index n = i+1."""
    if not isinstance(i, (int, np.integer)) or i < 1:
        raise ValueError(f"basis label must be an integer >= 1, got {i!r}")
    return basis_element(int(i) + 1)


@dataclass(frozen=True)
class HarmonicForm:
    """Finite combination sum_i c_i mu_i keyed by 1-based label."""

    coeffs: tuple[tuple[int, complex], ...]

    @classmethod
    def from_dict(cls, mapping: Mapping[int, complex]) -> "HarmonicForm":
        items = tuple(sorted((int(k), complex(v)) for k, v in mapping.items() if v != 0))
        for label, _ in items:
            if label < 1:
                raise ValueError(f"basis label must be >= 1, got {label}")
        return cls(items)

    @classmethod
    def unit(cls, label: int) -> "HarmonicForm":
        return cls.from_dict({label: 1.0})

    def as_dict(self) -> dict[int, complex]:
        return dict(self.coeffs)

    def __add__(self, other: "HarmonicForm") -> "HarmonicForm":
        merged = self.as_dict()
        for label, c in other.coeffs:
            merged[label] = merged.get(label, 0.0) + c
        return HarmonicForm.from_dict(merged)

    def __rmul__(self, scalar: complex) -> "HarmonicForm":
        return HarmonicForm.from_dict({k: scalar * v for k, v in self.coeffs})

    def coefficient_norm(self) -> float:
        return math.sqrt(sum(abs(c) ** 2 for _, c in self.coeffs))

    @property
    def labels(self) -> tuple[int, ...]:
        return tuple(k for k, _ in self.coeffs)


# ---------------------------------------------------------------------------
# quadrature


@dataclass(frozen=True)
class QuadratureRule:
    """Gauss rule on [0, 1] against the weight (1-v)**alpha.

    `variable` records whether v is x = r**2 ("x") or r itself ("r").
    integrate(g at nodes) approximates int_0^1 (1-v)^alpha g(v) dv and is
    exact for polynomial g of degree <= exact_degree.
    """

    variable: str
    alpha: int
    order: int
    nodes: np.ndarray
    weights: np.ndarray
    angular_order: int = 0

    @property
    def exact_degree(self) -> int:
        return 2 * self.order - 1

    def integrate(self, values: np.ndarray) -> complex:
        return np.dot(self.weights, values)

    def to_json(self) -> str:
        return json.dumps(
            {
                "variable": self.variable,
                "alpha": self.alpha,
                "order": self.order,
                "angular_order": self.angular_order,
                "nodes": self.nodes.tolist(),
                "weights": self.weights.tolist(),
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "QuadratureRule":
        data = json.loads(text)
        return cls(
            variable=data["variable"],
            alpha=int(data["alpha"]),
            order=int(data["order"]),
            nodes=np.asarray(data["nodes"], dtype=float),
            weights=np.asarray(data["weights"], dtype=float),
            angular_order=int(data.get("angular_order", 0)),
        )


def jacobi_x_rule(order: int, alpha: int, angular_order: int = 0) -> QuadratureRule:
    """Gauss-Jacobi rule in x on [0,1] for the weight (1-x)**alpha."""
    if order < 1:
        raise ValueError("quadrature order must be >= 1")
    if alpha < 0:
        raise ValueError("weight exponent must be >= 0")
    t, w = roots_jacobi(order, alpha, 0.0)
    nodes = 0.5 * (1.0 + t)
    weights = w * 0.5 ** (alpha + 1)
    return QuadratureRule("x", alpha, order, nodes, weights, angular_order)


def legendre_r_rule(order: int, angular_order: int = 0) -> QuadratureRule:
    """Plain Gauss rule in r on [0,1]; handles mixed-parity powers of r exactly."""
    rule = jacobi_x_rule(order, 0, angular_order)
    return QuadratureRule("r", 0, order, rule.nodes, rule.weights, angular_order)


@lru_cache(maxsize=64)
def _cached_x_rule(order: int, alpha: int) -> QuadratureRule:
    return jacobi_x_rule(order, alpha)


def default_x_rule(alpha: int = 4, order: int = DEFAULT_RULE_ORDER) -> QuadratureRule:
    return _cached_x_rule(order, alpha)


def default_grid() -> np.ndarray:
    return default_x_rule().nodes


# ---------------------------------------------------------------------------
# separable functions (finite sums of radial profile x angular mode)


def _polyval(coeffs: np.ndarray, x: np.ndarray) -> np.ndarray:
    return np.polynomial.polynomial.polyval(x, coeffs)


@dataclass(frozen=True)
class RadialTerm:
    """One term profile(x) * e^{i*mode*theta}.

    The profile is represented by samples on the shared radial grid together
    with its boundary decay order q (profile ~ (1-x)^q at x -> 1).  When the
    profile is x^{|mode|/2} (1-x)^q * P(x) with P polynomial, `coeffs` holds
    P's coefficients (ascending) and makes integration and the resolvent
    solve exact; samples alone remain sufficient for grid evaluation.
    """

    mode: int
    decay: int
    samples: np.ndarray
    coeffs: np.ndarray | None = None

    def profile_at(self, x: np.ndarray) -> np.ndarray:
        if self.coeffs is None:
            raise ValueError("term has no coefficient data; cannot evaluate off-grid")
        x = np.asarray(x, dtype=float)
        return x ** (abs(self.mode) / 2.0) * (1.0 - x) ** self.decay * _polyval(self.coeffs, x)


def _term_from_coeffs(mode: int, decay: int, coeffs: np.ndarray, x: np.ndarray) -> RadialTerm:
    coeffs = np.atleast_1d(np.asarray(coeffs))
    samples = x ** (abs(mode) / 2.0) * (1.0 - x) ** decay * _polyval(coeffs, x)
    return RadialTerm(mode=mode, decay=decay, samples=samples, coeffs=coeffs)


def _shift_coeffs(coeffs: np.ndarray, shift: int) -> np.ndarray:
    if shift == 0:
        return coeffs
    return np.concatenate([np.zeros(shift, dtype=coeffs.dtype), coeffs])


def _ones_minus_x_power(k: int) -> np.ndarray:
    # coefficients of (1-x)**k, ascending
    out = np.zeros(k + 1)
    for j in range(k + 1):
        out[j] = (-1) ** j * math.comb(k, j)
    return out


@dataclass(frozen=True)
class SeparableFunction:
    """Finite sum of RadialTerms over a shared radial grid in x = r**2."""

    x: np.ndarray
    terms: tuple[RadialTerm, ...]

    @classmethod
    def zero(cls, x: np.ndarray | None = None) -> "SeparableFunction":
        if x is None:
            x = default_grid()
        return cls(x=x, terms=())

    @classmethod
    def constant(cls, value: complex, x: np.ndarray | None = None) -> "SeparableFunction":
        if x is None:
            x = default_grid()
        if value == 0:
            return cls.zero(x)
        return cls(x=x, terms=(_term_from_coeffs(0, 0, np.array([value]), x),))

    @classmethod
    def from_basis_product(cls, i: int, j: int, x: np.ndarray | None = None) -> "SeparableFunction":
        """mu_i * conj(mu_j) with 1-based labels; a single term of mode p_j - p_i."""
        if x is None:
            x = default_grid()
        ei, ej = from_label(i), from_label(j)
        mode = ej.p - ei.p
        shift = min(ei.p, ej.p)
        coeffs = _shift_coeffs(np.array([ei.amplitude * ej.amplitude]), shift)
        return cls(x=x, terms=(_term_from_coeffs(mode, 4, coeffs, x),))

    @classmethod
    def from_form(cls, mu: HarmonicForm, x: np.ndarray | None = None) -> "SeparableFunction":
        """The combination itself: term of mode -p_i per label present."""
        if x is None:
            x = default_grid()
        terms = []
        for label, c in mu.coeffs:
            el = from_label(label)
            terms.append(_term_from_coeffs(-el.p, 2, np.array([c * el.amplitude]), x))
        return cls(x=x, terms=tuple(terms))

    def _check_grid(self, other: "SeparableFunction") -> None:
        if self.x.shape != other.x.shape or not np.array_equal(self.x, other.x):
            raise ValueError("separable functions live on different radial grids")

    def __add__(self, other: "SeparableFunction") -> "SeparableFunction":
        self._check_grid(other)
        by_mode: dict[int, list[RadialTerm]] = {}
        for t in self.terms + other.terms:
            by_mode.setdefault(t.mode, []).append(t)
        merged = []
        for mode in sorted(by_mode):
            group = by_mode[mode]
            if len(group) == 1:
                merged.append(group[0])
                continue
            samples = sum(t.samples for t in group)
            decay = min(t.decay for t in group)
            coeffs = None
            if all(t.coeffs is not None for t in group):
                parts = []
                for t in group:
                    c = t.coeffs
                    if t.decay > decay:
                        c = np.convolve(c, _ones_minus_x_power(t.decay - decay))
                    parts.append(c)
                width = max(len(c) for c in parts)
                coeffs = np.zeros(width, dtype=complex)
                for c in parts:
                    coeffs[: len(c)] += c
            merged.append(RadialTerm(mode=mode, decay=decay, samples=samples, coeffs=coeffs))
        return SeparableFunction(x=self.x, terms=tuple(merged))

    def __rmul__(self, scalar: complex) -> "SeparableFunction":
        terms = tuple(
            RadialTerm(
                mode=t.mode,
                decay=t.decay,
                samples=scalar * t.samples,
                coeffs=None if t.coeffs is None else scalar * t.coeffs,
            )
            for t in self.terms
        )
        return SeparableFunction(x=self.x, terms=terms)

    def conjugate(self) -> "SeparableFunction":
        terms = tuple(
            RadialTerm(
                mode=-t.mode,
                decay=t.decay,
                samples=np.conj(t.samples),
                coeffs=None if t.coeffs is None else np.conj(t.coeffs),
            )
            for t in self.terms
        )
        return SeparableFunction(x=self.x, terms=terms)

    def __mul__(self, other: "SeparableFunction") -> "SeparableFunction":
        self._check_grid(other)
        out = SeparableFunction.zero(self.x)
        for s in self.terms:
            for t in other.terms:
                mode = s.mode + t.mode
                decay = s.decay + t.decay
                samples = s.samples * t.samples
                coeffs = None
                if s.coeffs is not None and t.coeffs is not None:
                    shift = (abs(s.mode) + abs(t.mode) - abs(mode)) // 2
                    coeffs = _shift_coeffs(np.convolve(s.coeffs, t.coeffs), shift)
                piece = SeparableFunction(
                    x=self.x,
                    terms=(RadialTerm(mode=mode, decay=decay, samples=samples, coeffs=coeffs),),
                )
                out = out + piece
        return out

    def modes(self) -> tuple[int, ...]:
        return tuple(t.mode for t in self.terms)

    def values_at(self, x: np.ndarray, theta: np.ndarray) -> np.ndarray:
        """Evaluate on the outer-product grid x[:, None], theta[None, :]."""
        x = np.asarray(x, dtype=float)
        theta = np.asarray(theta, dtype=float)
        out = np.zeros((len(x), len(theta)), dtype=complex)
        for t in self.terms:
            out += np.outer(t.profile_at(x), np.exp(1j * t.mode * theta))
        return out


# ---------------------------------------------------------------------------
# hyperbolic-area integration


def _radial_factor(term_a: RadialTerm, term_b: RadialTerm, rule: QuadratureRule) -> np.ndarray:
    """Sampled reduced integrand for int profile_a * profile_b dA on rule nodes.

    Returns g with int = 4*pi * rule.integrate(g); requires combined decay to
    cover the measure's (1-x)^-2 and the rule weight (1-x)^alpha.
    """
    q = term_a.decay + term_b.decay
    spare = q - 2 - rule.alpha
    if spare < 0:
        raise ValueError(
            f"integrand decay {q} too small for measure plus weight exponent {rule.alpha}"
        )
    xp = (abs(term_a.mode) + abs(term_b.mode)) // 2
    if term_a.coeffs is not None and term_b.coeffs is not None:
        poly = np.convolve(term_a.coeffs, term_b.coeffs)
        xs = rule.nodes
        return xs**xp * _polyval(poly, xs) * (1.0 - xs) ** spare
    raise ValueError("integration requires coefficient-backed terms")


def _fitting_rule(pairs: list[tuple[RadialTerm, RadialTerm]]) -> QuadratureRule:
    """Default rule whose weight exponent fits the least-decaying term pair."""
    q_min = min(a.decay + b.decay for a, b in pairs)
    return _cached_x_rule(DEFAULT_RULE_ORDER, max(q_min - 2, 0))


def integrate_da(f: SeparableFunction, rule: QuadratureRule | None = None) -> complex:
    """int_D f dA; only mode-0 terms contribute."""
    unit = RadialTerm(mode=0, decay=0, samples=np.ones_like(f.x), coeffs=np.array([1.0]))
    pairs = [(t, unit) for t in f.terms if t.mode == 0]
    if not pairs:
        return 0.0 + 0.0j
    if rule is None:
        rule = _fitting_rule(pairs)
    total = 0.0 + 0.0j
    for a, b in pairs:
        total += 4.0 * math.pi * rule.integrate(_radial_factor(a, b, rule))
    return total


def integrate_da_product(
    f: SeparableFunction,
    g: SeparableFunction,
    rule: QuadratureRule | None = None,
    conjugate_second: bool = False,
) -> complex:
    """int_D f * g dA (or f * conj(g) when conjugate_second)."""
    f._check_grid(g)
    gg = g.conjugate() if conjugate_second else g
    pairs = [
        (s, t) for s in f.terms for t in gg.terms if s.mode + t.mode == 0
    ]
    if not pairs:
        return 0.0 + 0.0j
    if rule is None:
        rule = _fitting_rule(pairs)
    total = 0.0 + 0.0j
    for a, b in pairs:
        total += 4.0 * math.pi * rule.integrate(_radial_factor(a, b, rule))
    return total


def wp_inner(
    f: HarmonicForm, g: HarmonicForm, rule: QuadratureRule | None = None
) -> complex:
    """Petersson pairing <f, g> = int f conj(g) dA.

    Cross terms between different basis labels carry different angular modes
    and drop out exactly; only shared labels reach the radial quadrature.
    """
    if rule is None:
        rule = _cached_x_rule(DEFAULT_RULE_ORDER, 2)
    return integrate_da_product(
        SeparableFunction.from_form(f), SeparableFunction.from_form(g), rule, conjugate_second=True
    )


def gram_matrix(labels: Sequence[int], rule: QuadratureRule | None = None) -> np.ndarray:
    forms = [HarmonicForm.unit(i) for i in labels]
    n = len(forms)
    out = np.zeros((n, n), dtype=complex)
    for a in range(n):
        for b in range(n):
            out[a, b] = wp_inner(forms[a], forms[b], rule)
    return out


# ---------------------------------------------------------------------------
# sup norm


def sup_norm(mu: HarmonicForm, x_samples: int = 1200, refine: bool = True) -> float:
    """Supremum of |mu| over the disk.

    Scans a radial grid augmented with each single-element maximizer
    x = p/(p+4) (and the origin), maximizing over angle with a dense circle
    of sample points, then refines locally.  The returned value never
    overshoots the true supremum.
    """
    if not mu.coeffs:
        return 0.0
    elements = {label: from_label(label) for label in mu.labels}
    p_max = max(e.p for e in elements.values())

    xs = np.linspace(0.0, 1.0, x_samples, endpoint=False)
    extra = [e.p / (e.p + 4.0) for e in elements.values()] + [0.0]
    xs = np.unique(np.concatenate([xs, np.array(extra)]))

    n_theta = max(256, 8 * (p_max + 1))
    thetas = np.linspace(0.0, 2.0 * math.pi, n_theta, endpoint=False)

    def values(xv: np.ndarray, tv: np.ndarray) -> np.ndarray:
        total = np.zeros((len(xv), len(tv)), dtype=complex)
        for label, c in mu.coeffs:
            e = elements[label]
            radial = c * e.amplitude * xv ** (e.p / 2.0) * (1.0 - xv) ** 2
            total += np.outer(radial, np.exp(-1j * e.p * tv))
        return np.abs(total)

    grid = values(xs, thetas)
    best = float(grid.max())
    if not refine:
        return best

    ix, it = np.unravel_index(np.argmax(grid), grid.shape)
    x0 = xs[ix]
    dx = 1.0 / x_samples
    dt = 2.0 * math.pi / n_theta
    fine_x = np.clip(np.linspace(x0 - dx, x0 + dx, 41), 0.0, 1.0 - 1e-12)
    fine_t = thetas[it] + np.linspace(-dt, dt, 41)
    best = max(best, float(values(fine_x, fine_t).max()))
    return best
