"""Gauss-Hermite quadrature as an independent floating-point check.

Nodes come from the symmetric Jacobi matrix of the monic Hermite
recurrence; each node is then polished by one Newton step on the
orthonormal recurrence and the weights are taken from the
Christoffel formula, which is accurate even for the tiny outer weights.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import AdmissibilityError, ArgumentError, GapDegreeError, InconsistencyError
from .exactpoly import ExactPoly, count_real_roots
from .family import FamilySpec, norming_constant
from .operators import ChainStep
from .partitions import Partition, degree_sets, is_even

log = logging.getLogger(__name__)

__all__ = [
    "QuadRule",
    "WeightEval",
    "chain_norm_check",
    "converged_gram",
    "convergence_guard",
    "default_order",
    "formula_diagonal",
    "gauss_hermite_rule",
    "gram_matrix",
    "inner_product",
    "poly_values",
    "refine_order",
]

SQRT_PI = math.sqrt(math.pi)
COEFF_WARN = 1e15


@dataclass(frozen=True)
class QuadRule:
    order: int
    nodes: np.ndarray
    weights: np.ndarray

    def integrate(self, values: np.ndarray) -> float:
        """Sum of w_k * values_k, i.e. the integral of values * exp(-x^2)."""
        return float(np.dot(self.weights, values))


def _orthonormal_pair(n: int, x: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Scaled (p_{n-1}(x), p_n(x)) for Hermite polynomials orthonormal under exp(-x^2).

    Returns (q_{n-1}, q_n, log_scale) with p_k = q_k * exp(log_scale); the
    rescaling keeps high orders from overflowing at the outer nodes.
    """
    p_prev = np.zeros_like(x)
    p = np.full_like(x, math.pi ** -0.25)
    log_scale = np.zeros_like(x)
    for k in range(n):
        p_next = math.sqrt(2.0 / (k + 1)) * x * p - math.sqrt(k / (k + 1.0)) * p_prev
        p_prev, p = p, p_next
        big = np.maximum(np.abs(p), np.abs(p_prev))
        mask = big > 1e100
        if mask.any():
            s = np.where(mask, big, 1.0)
            p, p_prev = p / s, p_prev / s
            log_scale += np.log(s)
    return p_prev, p, log_scale


def gauss_hermite_rule(order: int) -> QuadRule:
    if order < 1:
        raise ArgumentError("quadrature order must be positive")
    off = np.sqrt(np.arange(1, order) / 2.0)
    x = np.linalg.eigvalsh(np.diag(off, 1) + np.diag(off, -1))
    pm1, pn, _ = _orthonormal_pair(order, x)
    x = x - pn / (math.sqrt(2.0 * order) * pm1)
    pm1, _, ls = _orthonormal_pair(order, x)
    w = np.exp(-2.0 * ls - np.log(order * pm1**2))
    # enforce exact symmetry of the rule
    x = 0.5 * (x - x[::-1])
    w = 0.5 * (w + w[::-1])
    return QuadRule(order, x, w)


def default_order(max_degree: int) -> int:
    return max(60, 4 * max_degree)


def poly_values(p: ExactPoly, x: np.ndarray) -> np.ndarray:
    """Horner evaluation of an exact polynomial at float nodes."""
    cs = p.float_coeffs()
    if cs and max(abs(c) for c in cs) > COEFF_WARN:
        log.warning("coefficients above %.0e in degree-%s polynomial; float evaluation may lose digits",
                    COEFF_WARN, p.degree)
    acc = np.zeros_like(x)
    for c in reversed(cs):
        acc = acc * x + c
    return acc


class WeightEval:
    """W_eta = eta^{-2} exp(-x^2) and R_eta for a zero-free eta."""

    def __init__(self, eta: ExactPoly, lam: Partition | None = None):
        if lam is not None and not is_even(lam):
            raise AdmissibilityError(f"{lam} is not even; the weight is singular")
        if count_real_roots(eta) != 0:
            raise AdmissibilityError("eta has real zeros; the weight is singular")
        self.lam = lam
        self.eta = eta
        self._d1 = eta.derivative()
        self._d2 = self._d1.derivative()

    @classmethod
    def for_partition(cls, lam: Partition, family: FamilySpec | None = None) -> "WeightEval":
        fam = family or FamilySpec(lam)
        return cls(fam.eta, lam)

    def eta_values(self, x: np.ndarray) -> np.ndarray:
        return poly_values(self.eta, np.asarray(x, dtype=float))

    def weight(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return np.exp(-x * x) / self.eta_values(x) ** 2

    def potential(self, x) -> np.ndarray:
        """R_eta = eta^{-3} (eta'' + 2x eta') exp(-x^2)."""
        x = np.asarray(x, dtype=float)
        e = self.eta_values(x)
        return (poly_values(self._d2, x) + 2 * x * poly_values(self._d1, x)) * np.exp(-x * x) / e**3

    def norm_sq(self, f: ExactPoly, rule: QuadRule) -> float:
        return self.inner(f, f, rule)

    def inner(self, f: ExactPoly, g: ExactPoly, rule: QuadRule) -> float:
        e = self.eta_values(rule.nodes)
        if np.min(e * e) <= 0.0:
            raise InconsistencyError("eta vanishes at a quadrature node")
        return rule.integrate(poly_values(f, rule.nodes) * poly_values(g, rule.nodes) / (e * e))


def inner_product(lam: Partition, f: ExactPoly, g: ExactPoly, rule: QuadRule,
                  family: FamilySpec | None = None) -> float:
    """<f, g>_lambda = integral of f g eta^{-2} exp(-x^2)."""
    if not is_even(lam):
        raise AdmissibilityError(f"{lam} is not an even partition")
    return WeightEval.for_partition(lam, family).inner(f, g, rule)


def gram_matrix(lam: Partition, degrees: Sequence[int], rule: QuadRule | None = None,
                family: FamilySpec | None = None) -> np.ndarray:
    if not is_even(lam):
        raise AdmissibilityError(f"{lam} is not an even partition")
    degrees = list(degrees)
    ds = degree_sets(lam)
    for n in degrees:
        if not ds.is_allowed(n):
            raise GapDegreeError(n)
    if not degrees:
        return np.zeros((0, 0))
    fam = family or FamilySpec(lam)
    if rule is None:
        rule = gauss_hermite_rule(default_order(max(degrees)))
    we = WeightEval(fam.eta, lam)
    e2 = we.eta_values(rule.nodes) ** 2
    vals = np.array([poly_values(fam.polynomial(n), rule.nodes) for n in degrees])
    return (vals * (rule.weights / e2)) @ vals.T


def formula_diagonal(lam: Partition, degrees: Sequence[int]) -> np.ndarray:
    return np.array([norming_constant(lam, n).value for n in degrees])


def convergence_guard(lam: Partition, degrees: Sequence[int], order: int, tol: float = 1e-9,
                      family: FamilySpec | None = None) -> float:
    """Relative change of the Gram diagonal when the order is doubled.

    Logs a warning (and returns the change) when it exceeds ``tol``.
    """
    degrees = list(degrees)
    if not degrees:
        return 0.0
    fam = family or FamilySpec(lam)
    a = np.diag(gram_matrix(lam, degrees, gauss_hermite_rule(order), fam))
    b = np.diag(gram_matrix(lam, degrees, gauss_hermite_rule(2 * order), fam))
    change = float(np.max(np.abs(a - b) / np.abs(b)))
    if change > tol:
        log.warning("quadrature order %d not converged: doubling changes the diagonal by %.3e",
                    order, change)
    return change


def _max_change(prev: np.ndarray, cur: np.ndarray) -> float:
    scale = np.max(np.abs(cur)) if cur.size else 0.0
    return 0.0 if scale == 0.0 else float(np.max(np.abs(cur - prev)) / scale)


def _gram_change(prev: np.ndarray, cur: np.ndarray) -> float:
    d = np.sqrt(np.abs(np.diag(cur)))
    return float(np.max(np.abs(cur - prev) / np.outer(d, d)))


def refine_order(evaluate, start: int, tol: float = 1e-11, max_order: int = 4096,
                 change=_max_change):
    """Double the rule order from ``start`` until ``evaluate(rule)`` settles.

    ``evaluate`` maps a QuadRule to an array and ``change(prev, cur)``
    measures the relative movement between two orders.  Returns
    (value, order); logs a warning if ``max_order`` is hit first.
    """
    order = max(1, start)
    prev = np.asarray(evaluate(gauss_hermite_rule(order)), dtype=float)
    while order * 2 <= max_order:
        order *= 2
        cur = np.asarray(evaluate(gauss_hermite_rule(order)), dtype=float)
        if change(prev, cur) <= tol:
            return cur, order
        prev = cur
    log.warning("quadrature did not settle below %.1e by order %d", tol, order)
    return prev, order


def converged_gram(lam: Partition, degrees: Sequence[int], start: int | None = None,
                   tol: float = 1e-11, family: FamilySpec | None = None):
    """Gram matrix with the order doubled until it stops moving; returns (matrix, order).

    Movement is measured entrywise against sqrt(G_ii G_jj), so small and
    large norms are held to the same relative standard.
    """
    degrees = list(degrees)
    if not degrees:
        return np.zeros((0, 0)), 0
    fam = family or FamilySpec(lam)
    if start is None:
        start = default_order(max(degrees))
    return refine_order(lambda r: gram_matrix(lam, degrees, r, fam), start, tol,
                        change=_gram_change)


def chain_norm_check(step: ChainStep, psi: ExactPoly, eps: int, rule: QuadRule) -> tuple[float, float]:
    """(||alpha psi||^2 under W_hi, (eps0 - eps) ||psi||^2 under W_lo)."""
    hat = step.alpha(psi)
    if not hat.is_polynomial():
        raise InconsistencyError("alpha(psi) is not a polynomial", hat)
    lo = WeightEval(step.eta_lo)
    hi = WeightEval(step.eta_hi)
    return hi.norm_sq(hat.as_poly(), rule), (step.eps0 - eps) * lo.norm_sq(psi, rule)
