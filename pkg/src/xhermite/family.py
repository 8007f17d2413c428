"""Classical Hermite polynomials and the exceptional family of a partition."""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .errors import AdmissibilityError, ArgumentError, GapDegreeError
from .exactpoly import ExactPoly, RatFun, wronskian
from .partitions import DegreeSets, Partition, degree_sets, is_even

__all__ = [
    "FamilySpec",
    "NormingConstant",
    "c_constant",
    "eta",
    "exceptional_hermite",
    "gap_wronskian",
    "hermite",
    "norming_constant",
    "pi_factor",
    "ratio_via_wronskians",
    "shifted_degrees",
]


@lru_cache(maxsize=None)
def hermite(n: int) -> ExactPoly:
    """Physicists' Hermite H_n from H_{k+1} = 2x H_k - 2k H_{k-1}."""
    if n < 0:
        raise ArgumentError("Hermite degree must be non-negative")
    if n == 0:
        return ExactPoly([1])
    if n == 1:
        return ExactPoly([0, 2])
    prev, cur = hermite(n - 2), hermite(n - 1)
    return ExactPoly([0, 2]) * cur - prev * (2 * (n - 1))


def _check_l(lam: Partition, l: int | None) -> int:
    if l is None:
        return lam.ell
    if l < lam.ell:
        raise ArgumentError(f"l = {l} is smaller than the length {lam.ell} of {lam}")
    return l


def shifted_degrees(lam: Partition, l: int) -> list[int]:
    """m_{i,l} = lambda_i + l - i for i = 1..l, largest first."""
    return [lam.part(i) + l - i for i in range(1, l + 1)]


def c_constant(lam: Partition, l: int) -> int:
    if l < lam.ell:
        raise ArgumentError(f"l = {l} is smaller than the length {lam.ell} of {lam}")
    prod = 1
    for i in range(1, l + 1):
        for j in range(i + 1, l + 1):
            prod *= lam.part(i) - lam.part(j) + j - i
    return 2 ** (l * (l - 1) // 2) * prod


def pi_factor(lam: Partition, l: int, n: int) -> int:
    if l < lam.ell:
        raise ArgumentError(f"l = {l} is smaller than the length {lam.ell} of {lam}")
    N = lam.N
    prod = 1
    for i in range(1, l + 1):
        prod *= n - N - lam.part(i) + i
    return prod


def _hermite_wronskian(degrees) -> ExactPoly:
    return wronskian([hermite(d) for d in degrees])


def _eta_raw(lam: Partition, l: int) -> ExactPoly:
    if l == 0:
        return ExactPoly([1])
    ms = shifted_degrees(lam, l)
    return _hermite_wronskian(reversed(ms)) / c_constant(lam, l)


@lru_cache(maxsize=256)
def _eta_cached(lam: Partition) -> ExactPoly:
    p = _eta_raw(lam, lam.ell)
    assert p.degree == lam.N if lam.N else p.degree == 0
    assert p.leading == 2 ** lam.N, (lam, p.leading)
    return p


def eta(lam: Partition, l: int | None = None) -> ExactPoly:
    """Normalized eta_lambda = 2^N x^N + ..., from an l-sized Hermite Wronskian."""
    l = _check_l(lam, l)
    base = _eta_cached(lam)
    if l == lam.ell:
        return base
    other = _eta_raw(lam, l)
    assert other == base, f"shift invariance failed for {lam} at l={l}"
    return other


def _check_allowed(lam: Partition, n: int, l: int) -> int:
    if n < 0:
        raise GapDegreeError(n, f"degree {n} is negative")
    if n - lam.N + l < 0:
        raise GapDegreeError(n)
    pf = pi_factor(lam, l, n)
    if pf == 0:
        raise GapDegreeError(n)
    return pf


def _xh_raw(lam: Partition, n: int, l: int) -> ExactPoly:
    pf = _check_allowed(lam, n, l)
    ms = shifted_degrees(lam, l)
    w = _hermite_wronskian(list(reversed(ms)) + [n - lam.N + l])
    return w / (2**l * c_constant(lam, l) * pf)


def exceptional_hermite(lam: Partition, n: int, l: int | None = None) -> ExactPoly:
    """H^lambda_n, of degree n with leading coefficient 2^n.

    Raises GapDegreeError when n is an exceptional degree.
    """
    l = _check_l(lam, l)
    if lam.N == 0 and l == 0:
        if n < 0:
            raise GapDegreeError(n)
        return hermite(n)
    p = _xh_raw(lam, n, lam.ell)
    assert p.degree == n and p.leading == 2**n, (lam, n, p)
    if l != lam.ell:
        other = _xh_raw(lam, n, l)
        assert other == p, f"shift invariance failed for {lam}, n={n}, l={l}"
    return p


def ratio_via_wronskians(lam: Partition, n: int, l: int) -> RatFun:
    """H^lambda_n / eta_lambda from l-sized Wronskians without the C constant."""
    l = _check_l(lam, l)
    pf = _check_allowed(lam, n, l)
    ms = list(reversed(shifted_degrees(lam, l)))
    top = _hermite_wronskian(ms + [n - lam.N + l])
    bottom = _hermite_wronskian(ms) if ms else ExactPoly([1])
    return RatFun(top, bottom * (2**l * pf))


def gap_wronskian(lam: Partition, n: int | None = None) -> ExactPoly:
    """Wr(H_{k_N}, ..., H_{k_1}[, H_n]) over the exceptional degrees."""
    ks = list(degree_sets(lam).exceptional)
    if n is not None:
        ks.append(n)
    if not ks:
        return ExactPoly([1])
    return _hermite_wronskian(ks)


@dataclass(frozen=True)
class NormingConstant:
    """<H^lambda_n, H^lambda_n> = q * sqrt(pi), with q kept exact."""

    n: int
    q: Fraction

    @property
    def value(self) -> float:
        return float(self.q) * math.sqrt(math.pi)

    def __str__(self):
        return f"({self.q})*sqrt(pi)"


def norming_constant(lam: Partition, n: int) -> NormingConstant:
    if not is_even(lam):
        raise AdmissibilityError(f"{lam} is not even; the weight is singular")
    N = lam.N
    pf = pi_factor(lam, N, n)
    if pf == 0 or n < 0:
        raise GapDegreeError(n)
    q = Fraction(2) ** (n - N) * math.factorial(n) / pf
    assert q > 0, (lam, n, q)
    return NormingConstant(n, q)


@dataclass
class FamilySpec:
    """A partition with its eta, degree sets, and a memo of H^lambda_n.

    The memo is guarded by a lock so a FamilySpec can be shared between
    threads; the stored polynomials are immutable.
    """

    lam: Partition
    eta: ExactPoly = field(init=False)
    degree_sets: DegreeSets = field(init=False)
    cache: dict[int, ExactPoly] = field(init=False, default_factory=dict)
    _lock: threading.Lock = field(init=False, default_factory=threading.Lock, repr=False)

    def __post_init__(self):
        self.eta = eta(self.lam)
        self.degree_sets = degree_sets(self.lam)

    @property
    def N(self) -> int:
        return self.lam.N

    def polynomial(self, n: int) -> ExactPoly:
        with self._lock:
            p = self.cache.get(n)
        if p is not None:
            return p
        p = exceptional_hermite(self.lam, n)
        with self._lock:
            return self.cache.setdefault(n, p)

    def polynomials(self, cutoff: int) -> dict[int, ExactPoly]:
        return {n: self.polynomial(n) for n in self.degree_sets.allowed(cutoff)}

    def norming_constant(self, n: int) -> NormingConstant:
        return norming_constant(self.lam, n)
