"""Differential expressions chi, tau, alpha, beta and the exact identities they satisfy.

Everything here works in exact rational-function arithmetic.  Gaussian
factors such as exp(x^2) never appear: beta is applied through its
cancelled closed form

    beta_{eta,xi} y = (eta y' - eta' y - 2 x eta y) / xi,

which is Wr(eta e^{x^2}, y) / (xi e^{x^2}) expanded by hand.  Weighted
identities (adjoint, Lagrange, norm) are likewise checked after dividing
out their common exp(-x^2).

Verification functions return the residual they computed and raise
``InconsistencyError`` if it is not identically zero.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence, Union

from .errors import AdmissibilityError, ArgumentError, GapDegreeError, InconsistencyError
from .exactpoly import ExactPoly, RatFun, X, wronskian
from .family import FamilySpec, eta as eta_of, exceptional_hermite, hermite
from .partitions import Partition, degree_sets, is_even, truncate

__all__ = [
    "ChainStep",
    "NormChainState",
    "adjoint_identity_residual",
    "alpha_apply",
    "beta_apply",
    "build_chain",
    "chi",
    "check_spectrum_removal",
    "lagrange_identity_residual",
    "norm_chain",
    "norm_identity_residual",
    "spectrum",
    "tau_apply",
    "verify_chi_general",
    "verify_eigen",
    "verify_factorization",
]

Func = Union[ExactPoly, RatFun]


def _d(f: Func) -> Func:
    return f.derivative()


def chi(f: Func, g: Func) -> Func:
    """f g'' - 2 f' g' + f'' g - 2x (f g' - f' g)."""
    f1, g1 = _d(f), _d(g)
    f2, g2 = _d(f1), _d(g1)
    return f * g2 - f1 * g1 * 2 + f2 * g - X * (f * g1 - f1 * g) * 2


def _nonzero(p: ExactPoly, name: str) -> None:
    if p.is_zero():
        raise ArgumentError(f"{name} must be a non-zero polynomial")


def tau_apply(eta: ExactPoly, y: Func) -> RatFun:
    _nonzero(eta, "eta")
    return RatFun.of(chi(eta, y)) / eta


def alpha_apply(xi: ExactPoly, eta: ExactPoly, y: Func) -> RatFun:
    """alpha_{xi,eta} y = Wr(xi, y) / eta."""
    _nonzero(eta, "eta")
    return RatFun.of(xi * _d(y) - xi.derivative() * y) / eta


def beta_apply(eta: ExactPoly, xi: ExactPoly, y: Func) -> RatFun:
    """beta_{eta,xi} y = (eta y' - eta' y - 2x eta y) / xi."""
    _nonzero(xi, "xi")
    return RatFun.of(eta * _d(y) - (eta.derivative() + X * eta * 2) * y) / xi


def _require_zero(res: Func, what: str) -> Func:
    if not res.is_zero():
        raise InconsistencyError(what, res)
    return res


def verify_eigen(lam: Partition, n: int, family: FamilySpec | None = None) -> int:
    """Check chi(eta, H^lambda_n) = 2(N - n) eta H^lambda_n exactly; return 2(N - n)."""
    if family is not None:
        e, h = family.eta, family.polynomial(n)
    else:
        if not degree_sets(lam).is_allowed(n):
            raise GapDegreeError(n)
        e, h = eta_of(lam), exceptional_hermite(lam, n)
    ev = 2 * (lam.N - n)
    _require_zero(chi(e, h) - e * h * ev, f"eigen relation for {lam}, n={n}")
    return ev


def verify_chi_general(ms: Sequence[int], m: int) -> int:
    """Check chi(Wr(H_ms), Wr(H_ms, H_m)) = 2(l - m) * both; return 2(l - m)."""
    ms = list(ms)
    if len(set(ms)) != len(ms) or m in ms or m < 0 or any(v < 0 for v in ms):
        raise ArgumentError("degrees must be distinct non-negative integers")
    hs = [hermite(v) for v in ms]
    eta = wronskian(hs) if hs else ExactPoly([1])
    xi = wronskian(hs + [hermite(m)])
    ev = 2 * (len(ms) - m)
    _require_zero(chi(eta, xi) - eta * xi * ev, f"chi identity for ms={ms}, m={m}")
    return ev


@dataclass(frozen=True)
class ChainStep:
    """One Darboux step: tau_lo = beta alpha + eps0, tau_hi = alpha beta + eps0 + 2."""

    j: int
    eta_lo: ExactPoly
    eta_hi: ExactPoly
    eps0: int
    meta: dict = field(default_factory=dict, compare=False)

    def check(self) -> None:
        _nonzero(self.eta_lo, "eta_lo")
        _nonzero(self.eta_hi, "eta_hi")
        res = chi(self.eta_lo, self.eta_hi) - self.eta_lo * self.eta_hi * self.eps0
        _require_zero(res, f"chain step {self.j} invariant")

    def alpha(self, y: Func) -> RatFun:
        return alpha_apply(self.eta_hi, self.eta_lo, y)

    def beta(self, y: Func) -> RatFun:
        return beta_apply(self.eta_lo, self.eta_hi, y)


def build_chain(
    lam: Partition, mode: str = "descending", degrees: Sequence[int] | None = None
) -> list[ChainStep]:
    """Factorization chain of an even partition.

    ``descending`` walks lambda^(0) -> lambda^(1) -> ... -> empty with
    eps0 = 2 ell_j.  ``ascending`` adjoins the Hermite polynomials of the
    allowed ``degrees`` (default: the sporadic degrees) one at a time to
    the gap-set Wronskian, with eps0 = 2(N + i - n_{i+1}).
    """
    if not is_even(lam):
        raise AdmissibilityError(f"{lam} is not an even partition")
    steps: list[ChainStep] = []
    if mode == "descending":
        lo = lam
        for j in range(lam.first):
            hi = truncate(lam, j + 1)
            step = ChainStep(
                j, eta_of(lo), eta_of(hi), 2 * lo.ell,
                {"lo": lo, "hi": hi, "ell": lo.ell},
            )
            step.check()
            steps.append(step)
            lo = hi
        return steps
    if mode != "ascending":
        raise ArgumentError(f"unknown chain mode {mode!r}")
    ds = degree_sets(lam)
    if degrees is None:
        degrees = ds.sporadic
    degrees = list(degrees)
    if len(set(degrees)) != len(degrees):
        raise ArgumentError("chain degrees must be distinct")
    for n in degrees:
        if not ds.is_allowed(n):
            raise GapDegreeError(n)
    hs = [hermite(k) for k in ds.exceptional]
    lo_poly = wronskian(hs) if hs else ExactPoly([1])
    for i, n in enumerate(degrees):
        hs.append(hermite(n))
        hi_poly = wronskian(hs)
        step = ChainStep(
            i, lo_poly, hi_poly, 2 * (lam.N + i - n),
            {"added_degree": n, "size": len(hs) - 1},
        )
        step.check()
        steps.append(step)
        lo_poly = hi_poly
    return steps


def verify_factorization(step: ChainStep, probe: Func) -> tuple[RatFun, RatFun]:
    """Residuals of tau_lo y - beta alpha y - eps0 y and tau_hi y - alpha beta y - (eps0+2) y."""
    y = RatFun.of(probe)
    r_lo = tau_apply(step.eta_lo, y) - step.beta(step.alpha(y)) - y * step.eps0
    _require_zero(r_lo, f"lower factorization at step {step.j}")
    r_hi = tau_apply(step.eta_hi, y) - step.alpha(step.beta(y)) - y * (step.eps0 + 2)
    _require_zero(r_hi, f"upper factorization at step {step.j}")
    return r_lo, r_hi


def adjoint_identity_residual(xi: ExactPoly, eta: ExactPoly, f: Func, g: Func) -> RatFun:
    """(alpha f) g / xi^2 + f (beta g) / eta^2 - D[fg/(eta xi)] + 2x fg/(eta xi).

    This is the adjoint relation between alpha and -beta with exp(-x^2)
    divided out.
    """
    _nonzero(xi, "xi")
    _nonzero(eta, "eta")
    a = alpha_apply(xi, eta, f) * g / (xi * xi)
    b = beta_apply(eta, xi, g) * f / (eta * eta)
    p = RatFun.of(f * g) / (eta * xi)
    res = a + b - p.derivative() + p * X * 2
    return _require_zero(res, "adjoint identity")


def lagrange_identity_residual(eta: ExactPoly, f: Func, g: Func) -> RatFun:
    """(tau f) g - f (tau g) + eta^2 D[Wr(f,g)/eta^2] - 2x Wr(f,g), with Wr(f,g) = f g' - f' g."""
    _nonzero(eta, "eta")
    w = RatFun.of(f * _d(g) - _d(f) * g)
    e2 = eta * eta
    res = (
        tau_apply(eta, f) * g
        - tau_apply(eta, g) * f
        + (w / e2).derivative() * e2
        - w * X * 2
    )
    return _require_zero(res, "Lagrange identity")


@dataclass(frozen=True)
class NormChainState:
    i: int
    xi: ExactPoly
    eta: ExactPoly
    rho: RatFun


def norm_chain(ms: Sequence[int], m: int) -> list[NormChainState]:
    """States (xi_i, eta_i, rho_i) for i = 0..l."""
    ms = list(ms)
    if len(set(ms)) != len(ms) or m in ms or m < 0 or any(v < 0 for v in ms):
        raise ArgumentError("degrees must be distinct non-negative integers")
    hs: list[ExactPoly] = []
    hm = hermite(m)
    states = [NormChainState(0, hm, ExactPoly([1]), RatFun(ExactPoly()))]
    for i, mi in enumerate(ms):
        hs.append(hermite(mi))
        eta = wronskian(hs)
        xi = wronskian(hs + [hm])
        prev = states[-1]
        rho = RatFun(prev.xi * xi, prev.eta * eta) + prev.rho * (2 * (m - mi))
        states.append(NormChainState(i + 1, xi, eta, rho))
    return states


def norm_identity_residual(ms: Sequence[int], m: int) -> RatFun:
    """(xi_l/eta_l)^2 - 2^l prod(m - m_i) H_m^2 - (rho_l' - 2x rho_l)."""
    states = norm_chain(ms, m)
    last = states[-1]
    coef = 2 ** len(ms)
    for mi in ms:
        coef *= m - mi
    ratio = RatFun(last.xi, last.eta)
    res = ratio * ratio - RatFun(states[0].xi * states[0].xi * coef) - (
        last.rho.derivative() - last.rho * X * 2
    )
    return _require_zero(res, f"norm identity for ms={list(ms)}, m={m}")


def spectrum(lam: Partition, cutoff: int, convention: str = "operator") -> list[int]:
    """Eigenvalues attached to allowed degrees n <= cutoff, sorted ascending.

    ``operator``: eigenvalues 2(N - n) of tau_lambda (largest first in the
    chain sense; max is the factorization energy).  ``slp``: the
    Sturm-Liouville eigenvalues 2(n - N).
    """
    ns = degree_sets(lam).allowed(cutoff)
    if convention == "operator":
        vals = [2 * (lam.N - n) for n in ns]
    elif convention == "slp":
        vals = [2 * (n - lam.N) for n in ns]
    else:
        raise ArgumentError(f"unknown convention {convention!r}")
    return sorted(vals)


def check_spectrum_removal(lam: Partition, cutoff: int) -> list[dict]:
    """Check sigma_{j+1} - 2 = sigma_j minus {2 ell_j} along the descending chain.

    Spectra are truncated at allowed degrees <= cutoff on each level; the
    comparison is restricted to the value window where both truncations are
    complete.  Also checks max sigma_j = 2 ell_j.  Returns one record per step.
    """
    if not is_even(lam):
        raise AdmissibilityError(f"{lam} is not an even partition")
    if cutoff < lam.first + lam.N:
        raise ArgumentError("cutoff must be at least lambda_1 + N")
    rows = []
    for j in range(lam.first):
        lo, hi = truncate(lam, j), truncate(lam, j + 1)
        s_lo = spectrum(lo, cutoff)
        s_hi = [v - 2 for v in spectrum(hi, cutoff)]
        floor = max(2 * (lo.N - cutoff), 2 * (hi.N - cutoff) - 2)
        a = sorted(v for v in s_lo if v >= floor and v != 2 * lo.ell)
        b = sorted(v for v in s_hi if v >= floor)
        top = max(s_lo)
        ok = a == b and top == 2 * lo.ell
        rec = {"j": j, "partition": lo, "ell": lo.ell, "max": top, "window_floor": floor,
               "removed": 2 * lo.ell, "ok": ok}
        if not ok:
            raise InconsistencyError(f"spectrum removal failed at step {j}", (a, b, top))
        rows.append(rec)
    return rows
