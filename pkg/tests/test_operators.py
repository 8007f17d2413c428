import random
from itertools import combinations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from xhermite.errors import AdmissibilityError, ArgumentError, GapDegreeError, InconsistencyError
from xhermite.exactpoly import ExactPoly, RatFun, X, wronskian
from xhermite.family import FamilySpec, eta, exceptional_hermite, hermite
from xhermite.operators import (
    ChainStep,
    adjoint_identity_residual,
    alpha_apply,
    beta_apply,
    build_chain,
    check_spectrum_removal,
    chi,
    lagrange_identity_residual,
    norm_chain,
    norm_identity_residual,
    spectrum,
    tau_apply,
    verify_chi_general,
    verify_eigen,
    verify_factorization,
)
from xhermite.partitions import Partition, degree_sets, even_partitions_of

ONE = ExactPoly([1])
P22 = Partition((2, 2))
P3311 = Partition((3, 3, 1, 1))
EVEN_SMALL = [lam for n in range(0, 9, 2) for lam in even_partitions_of(n)]

int_polys = st.lists(st.integers(-9, 9), min_size=1, max_size=7).map(ExactPoly)


def _rand_poly(rng, max_deg=6):
    return ExactPoly([rng.randint(-9, 9) for _ in range(rng.randint(0, max_deg) + 1)])


# -- basic expressions -------------------------------------------------------------

@pytest.mark.parametrize("m", range(8))
def test_chi_with_one_is_hermite_equation(m):
    assert chi(ONE, hermite(m)) == hermite(m) * (-2 * m)


@given(int_polys)
def test_chi_diagonal(f):
    d1 = f.derivative()
    assert chi(f, f) == f * d1.derivative() * 2 - d1 * d1 * 2


def test_chi_eigen_example():
    e, h = eta(P22), exceptional_hermite(P22, 2)
    assert chi(e, h) == e * h * 4


def test_tau_examples():
    y = ExactPoly([1, -3, 2, 5])
    assert tau_apply(ONE, y) == RatFun(y.derivative().derivative() - X * y.derivative() * 2)
    assert tau_apply(ONE, hermite(3)) == RatFun(hermite(3) * -6)
    r = tau_apply(eta(P22), exceptional_hermite(P22, 2))
    assert r.is_polynomial() and r.as_poly() == exceptional_hermite(P22, 2) * 4
    with pytest.raises(ArgumentError):
        tau_apply(ExactPoly(), y)


def test_alpha_examples():
    xi = eta(P22)
    assert alpha_apply(xi, ExactPoly([3, 1]), xi).is_zero()
    y = ExactPoly([4, 0, 1, 7])
    assert alpha_apply(ONE, ONE, y) == RatFun(y.derivative())
    with pytest.raises(ArgumentError):
        alpha_apply(ONE, ExactPoly(), y)


def test_beta_examples():
    y = ExactPoly([4, 0, 1, 7])
    assert beta_apply(ONE, ONE, y) == RatFun(y.derivative() - X * y * 2)
    with pytest.raises(ArgumentError):
        beta_apply(ONE, ExactPoly(), y)


@pytest.mark.parametrize("n", [3, 6, 7, 9])
def test_alpha_moves_along_ascending_chain(n):
    # alpha maps H^lambda_n, a multiple of Wr(K, H_n), to a multiple of Wr(K, H_2, H_n)
    step = build_chain(P22, "ascending")[0]
    assert step.meta["added_degree"] == 2
    hs = [hermite(k) for k in degree_sets(P22).exceptional]
    image = step.alpha(exceptional_hermite(P22, n))
    target = wronskian(hs + [hermite(2), hermite(n)])
    assert image.is_polynomial()
    q = image / RatFun(target)
    assert q.is_polynomial() and q.as_poly().is_constant() and not q.is_zero()


@pytest.mark.parametrize("n", [2, 3, 6, 7, 8])
def test_beta_alpha_on_eigenfunctions(n):
    step = build_chain(P22)[0]
    psi = exceptional_hermite(P22, n)
    eps = 2 * (P22.N - n)
    assert step.beta(step.alpha(psi)) == RatFun(psi * (eps - step.eps0))


# -- eigen relation and the chi-Wronskian identity ----------------------------------

@pytest.mark.parametrize("lam, n, ev", [(P22, 2, 4), (Partition(), 5, -10), (P3311, 4, 8)])
def test_verify_eigen_examples(lam, n, ev):
    assert verify_eigen(lam, n) == ev


def test_verify_eigen_gap():
    with pytest.raises(GapDegreeError):
        verify_eigen(P22, 4)


def test_verify_eigen_detects_wrong_polynomial():
    fam = FamilySpec(P22)
    fam.cache[2] = fam.polynomial(2) + 1
    with pytest.raises(InconsistencyError) as info:
        verify_eigen(P22, 2, fam)
    assert not info.value.residual.is_zero()


@pytest.mark.parametrize("lam", [lam for n in range(1, 7) for lam in __import__(
    "xhermite.partitions", fromlist=["partitions_of"]).partitions_of(n)], ids=str)
def test_eigen_relation_holds_for_odd_partitions_too(lam):
    # the eigen identity is algebraic; evenness only matters for positivity
    for n in degree_sets(lam).allowed(lam.first + lam.N + 3):
        verify_eigen(lam, n)


@pytest.mark.parametrize("ms, m, ev", [([2, 3], 0, 4), ([], 6, -12), ([1], 4, -6), ([0, 3], 1, 2)])
def test_verify_chi_general_examples(ms, m, ev):
    assert verify_chi_general(ms, m) == ev


def test_verify_chi_general_rejects_repeats():
    with pytest.raises(ArgumentError):
        verify_chi_general([2, 2], 1)
    with pytest.raises(ArgumentError):
        verify_chi_general([2, 3], 3)


def test_chi_general_exhaustive():
    # includes degree 0 in ms, which the identity tolerates
    for size in range(4):
        for ms in combinations(range(8), size):
            for m in range(8):
                if m not in ms:
                    verify_chi_general(ms, m)


# -- chains ---------------------------------------------------------------------------

def test_descending_chain_3311():
    steps = build_chain(P3311)
    assert [s.eps0 for s in steps] == [8, 4, 4]
    assert [s.meta["lo"] for s in steps] == [P3311, P22, Partition((1, 1))]
    assert steps[0].eta_hi == eta(P22)
    assert steps[-1].eta_hi.is_constant()


def test_descending_chain_22_and_empty():
    assert [s.eps0 for s in build_chain(P22)] == [4, 4]
    assert build_chain(Partition()) == []


def test_chain_rejects_odd():
    with pytest.raises(AdmissibilityError):
        build_chain(Partition((2, 1)))


def test_ascending_chain_energies():
    steps = build_chain(P3311, "ascending")
    ns = degree_sets(P3311).sporadic
    assert [s.eps0 for s in steps] == [2 * (P3311.N + i - n) for i, n in enumerate(ns)]
    custom = build_chain(P22, "ascending", [3, 6, 7])
    assert [s.eps0 for s in custom] == [2, -2, -2]
    with pytest.raises(GapDegreeError):
        build_chain(P22, "ascending", [4])
    with pytest.raises(ArgumentError):
        build_chain(P22, "sideways")


def test_chain_step_check_catches_bad_energy():
    step = build_chain(P22)[0]
    bad = ChainStep(0, step.eta_lo, step.eta_hi, step.eps0 + 2)
    with pytest.raises(InconsistencyError):
        bad.check()


def test_factorization_examples():
    classical = ChainStep(0, ONE, ONE, 0)
    r_lo, r_hi = verify_factorization(classical, ONE)
    assert r_lo.is_zero() and r_hi.is_zero()
    step = build_chain(P22)[0]
    for probe in [ONE, X, X * X, exceptional_hermite(P22, 2)]:
        verify_factorization(step, probe)


@pytest.mark.parametrize("lam", EVEN_SMALL, ids=str)
def test_factorization_telescope(lam):
    probes = [X**k for k in range(6)]
    probes += [exceptional_hermite(lam, n) for n in degree_sets(lam).allowed(lam.N + 4)]
    steps = build_chain(lam)
    assert len(steps) == lam.first
    if steps:
        assert steps[-1].eta_hi.is_constant()
    for step in steps:
        for p in probes:
            verify_factorization(step, p)


@given(int_polys)
def test_factorization_random_probes_3311(probe):
    for step in build_chain(P3311) + build_chain(P3311, "ascending"):
        verify_factorization(step, probe)


# -- adjoint and Lagrange ---------------------------------------------------------------

def test_adjoint_examples():
    assert adjoint_identity_residual(ONE, ONE, ONE, ONE).is_zero()
    assert adjoint_identity_residual(eta(P22), ONE, hermite(2), hermite(3)).is_zero()


def test_adjoint_random():
    rng = random.Random(20240611)
    pairs = [(s.eta_hi, s.eta_lo) for s in build_chain(P3311)] + [(ONE, ONE)]
    for _ in range(100):
        xi, e = rng.choice(pairs)
        adjoint_identity_residual(xi, e, _rand_poly(rng, 5), _rand_poly(rng, 5))


def test_lagrange_examples():
    assert lagrange_identity_residual(ONE, hermite(1), hermite(2)).is_zero()
    f = ExactPoly([1, 2, 3])
    assert lagrange_identity_residual(eta(P22), f, f).is_zero()


def test_lagrange_random():
    rng = random.Random(7)
    etas = [eta(P22), eta(P3311), ONE, ExactPoly([1, 0, 1])]
    for _ in range(100):
        lagrange_identity_residual(rng.choice(etas), _rand_poly(rng), _rand_poly(rng))


def test_lagrange_sign_matters():
    # with the sign of the Wronskian term flipped the residual is not zero
    f, g = hermite(1), hermite(2)
    w = RatFun(f * g.derivative() - f.derivative() * g)
    flipped = tau_apply(ONE, f) * g - tau_apply(ONE, g) * f - w.derivative() + w * X * 2
    assert not flipped.is_zero()


# -- norm identity ---------------------------------------------------------------------

def test_norm_identity_examples():
    assert norm_identity_residual([], 3).is_zero()
    assert norm_identity_residual([2, 3], 0).is_zero()
    assert norm_identity_residual([1, 4, 5], 2).is_zero()


def test_norm_chain_states():
    states = norm_chain([2, 3], 0)
    assert states[0].rho.is_zero()
    assert [s.i for s in states] == [0, 1, 2]
    # prefactor 2^2 (0-2)(0-3) = 24
    assert 2**2 * (0 - 2) * (0 - 3) == 24
    with pytest.raises(ArgumentError):
        norm_chain([2, 2], 0)


@given(st.lists(st.integers(0, 8), max_size=3, unique=True), st.integers(0, 8))
def test_norm_identity_sampled(ms, m):
    if m not in ms:
        norm_identity_residual(ms, m)


# -- spectrum ---------------------------------------------------------------------------

def test_spectrum_examples():
    assert spectrum(P22, 8, "slp") == [-4, -2, 4, 6, 8]
    assert set(spectrum(Partition(), 3)) == {0, -2, -4, -6}
    assert spectrum(P3311, 13, "slp") == [-8, -2, 0, 6, 8, 10]
    assert spectrum(P22, 8) == [-8, -6, -4, 2, 4]
    with pytest.raises(ArgumentError):
        spectrum(P22, 8, "other")


@pytest.mark.parametrize("lam", [lam for lam in EVEN_SMALL if lam.N], ids=str)
def test_spectrum_removal(lam):
    rows = check_spectrum_removal(lam, lam.first + lam.N + 8)
    assert [r["max"] for r in rows] == [2 * r["ell"] for r in rows]
    assert all(r["ok"] for r in rows)
