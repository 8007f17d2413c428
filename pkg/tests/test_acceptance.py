"""Acceptance criteria, one test per criterion.

Every test records a single PASS/FAIL line, printed both inline (with -s)
and in the terminal summary.  Tolerances are the ones stated for each
criterion; nothing is loosened here.
"""

import math
import random
import time
from contextlib import contextmanager
from itertools import combinations

import numpy as np

from conftest import ACCEPTANCE_LINES
from xhermite.errors import InfeasibleGapSetError
from xhermite.exactpoly import X, count_real_roots
from xhermite.family import FamilySpec, eta, exceptional_hermite
from xhermite.operators import (
    build_chain,
    check_spectrum_removal,
    norm_identity_residual,
    spectrum,
    verify_eigen,
    verify_factorization,
)
from xhermite.partitions import (
    Partition,
    chain_lengths,
    degree_sets,
    even_partitions_of,
    is_even,
    partition_from_gapset,
    partitions_of,
    truncate,
    truncation_lengths,
)
from xhermite.quadrature import (
    chain_norm_check,
    converged_gram,
    default_order,
    formula_diagonal,
    gauss_hermite_rule,
    gram_matrix,
    refine_order,
)

SQRT_PI = math.sqrt(math.pi)


@contextmanager
def criterion(label):
    info = {}
    try:
        yield info
    except BaseException as exc:
        reason = str(exc).splitlines()[0] if str(exc) else type(exc).__name__
        line = f"FAIL  {label}: {info.get('detail', '')} ({reason})"
        ACCEPTANCE_LINES.append(line)
        print(line)
        raise
    line = f"PASS  {label}: {info.get('detail', '')}".rstrip()
    ACCEPTANCE_LINES.append(line)
    print(line)


def even_upto(n_max):
    return [lam for n in range(0, n_max + 1, 2) for lam in even_partitions_of(n)]


def test_criterion_01_worked_example():
    with criterion("1 worked example (3,3,1,1)") as info:
        t0 = time.perf_counter()
        lam = Partition((3, 3, 1, 1))
        ds = degree_sets(lam)
        assert set(ds.exceptional) == {0, 1, 2, 3, 5, 6, 9, 10}
        assert ds.allowed(13) == [4, 7, 8, 11, 12, 13]
        assert ds.sporadic == (4, 7, 8)
        assert [truncate(lam, j) for j in (1, 2, 3)] == [Partition((2, 2)), Partition((1, 1)), Partition()]
        assert truncation_lengths(lam)[1:] == [2, 2, 0]
        assert [row[1] for row in chain_lengths(lam)] == [4, 2, 2]
        elapsed = time.perf_counter() - t0
        assert elapsed < 1.0
        info["detail"] = f"exact match in {elapsed * 1e3:.1f} ms"


def test_criterion_02_eigen_identity():
    with criterion("2 exact eigen identity, even N <= 8") as info:
        t0 = time.perf_counter()
        count = 0
        for lam in even_upto(8):
            fam = FamilySpec(lam)
            for n in fam.degree_sets.allowed(lam.first + lam.N + 8):
                verify_eigen(lam, n, fam)
                count += 1
        elapsed = time.perf_counter() - t0
        assert elapsed < 60.0
        info["detail"] = f"{count} identities zero in {elapsed:.2f} s"


def _criterion3_errors(order_for):
    worst_diag = worst_off = 0.0
    where = None
    for lam in even_upto(6):
        fam = FamilySpec(lam)
        degs = fam.degree_sets.allowed(12)
        if not degs:
            continue
        formula = formula_diagonal(lam, degs)
        for i, n in enumerate(degs):
            for k in range(i, len(degs)):
                m = degs[k]
                g = gram_matrix(lam, [n, m], gauss_hermite_rule(order_for(lam, max(n, m))), fam)
                if k == i:
                    err = abs(g[0, 0] / formula[i] - 1)
                    if err > worst_diag:
                        worst_diag, where = err, (str(lam), n)
                else:
                    worst_off = max(worst_off, abs(g[0, 1]) / math.sqrt(formula[i] * formula[k]))
    return worst_diag, worst_off, where


def test_criterion_03_norming_constants():
    with criterion("3 norming constants at order max(60, 4n)") as info:
        diag, off, where = _criterion3_errors(lambda lam, n: default_order(n))
        info["detail"] = f"max diag rel err {diag:.2e} at {where}, max off-diag {off:.2e}"
        assert diag < 1e-8, "diagonal tolerance 1e-8 not met"
        assert off < 1e-9, "off-diagonal tolerance 1e-9 not met"


def test_criterion_03_companion_converged_orders():
    # Informational companion to criterion 3: same grid, order doubled until settled.
    with criterion("3* (companion) norming constants at converged orders") as info:
        worst_diag = worst_off = 0.0
        orders = []
        for lam in even_upto(6):
            degs = degree_sets(lam).allowed(12)
            g, order = converged_gram(lam, degs)
            orders.append(order)
            d = formula_diagonal(lam, degs)
            worst_diag = max(worst_diag, float(np.max(np.abs(np.diag(g) / d - 1))))
            off = np.abs(g - np.diag(np.diag(g))) / np.sqrt(np.outer(d, d))
            worst_off = max(worst_off, float(off.max()))
        info["detail"] = (f"max diag rel err {worst_diag:.2e}, max off-diag {worst_off:.2e}, "
                          f"orders {min(orders)}..{max(orders)}")
        assert worst_diag < 1e-8 and worst_off < 1e-9


def test_criterion_04_classical_baseline():
    with criterion("4 classical Gram diagonal, n <= 12") as info:
        degs = list(range(13))
        g = gram_matrix(Partition(), degs, gauss_hermite_rule(default_order(12)))
        exact = np.array([SQRT_PI * 2.0**n * math.factorial(n) for n in degs])
        err = float(np.max(np.abs(np.diag(g) / exact - 1)))
        info["detail"] = f"max rel err {err:.2e}"
        assert err < 1e-10


def test_criterion_05_norm_identity():
    with criterion("5 norm identity, ms in {0..8}, |ms| <= 3") as info:
        count = 0
        for size in range(4):
            for ms in combinations(range(9), size):
                for m in range(9):
                    if m in ms:
                        continue
                    assert norm_identity_residual(ms, m).is_zero()
                    count += 1
        info["detail"] = f"{count} residuals identically zero"


def test_criterion_06_factorization_chains():
    with criterion("6 descending factorization chains, even N <= 8") as info:
        count = 0
        x_powers = [X**k for k in range(6)]
        for lam in even_upto(8):
            steps = build_chain(lam)
            assert len(steps) == lam.first
            if steps:
                assert steps[-1].eta_hi.is_constant()
            probes = x_powers + [exceptional_hermite(lam, n) for n in degree_sets(lam).allowed(lam.N + 4)]
            for step in steps:
                step.check()
                for p in probes:
                    verify_factorization(step, p)
                    count += 1
        info["detail"] = f"{count} probe pairs, all residuals zero"


def test_criterion_07_spectrum_removal():
    with criterion("7 spectrum removal along chains, even N <= 8") as info:
        count = 0
        for lam in even_upto(8):
            if not lam.N:
                continue
            cutoff = lam.first + lam.N + 8
            rows = check_spectrum_removal(lam, cutoff)
            for r in rows:
                lo = truncate(lam, r["j"])
                assert max(spectrum(lo, cutoff)) == 2 * lo.ell == r["max"]
            count += len(rows)
        info["detail"] = f"{count} chain levels"


def test_criterion_08_krein_adler():
    with criterion("8 Krein-Adler over all partitions N <= 8") as info:
        count = 0
        for n in range(9):
            for lam in partitions_of(n):
                assert (count_real_roots(eta(lam)) == 0) == is_even(lam), str(lam)
                count += 1
        info["detail"] = f"{count} partitions"


def test_criterion_09_darboux_norm_relation():
    with criterion("9 Darboux norm relation, even N <= 4, deg <= 8") as info:
        worst = 0.0
        count = 0
        for lam in even_upto(4):
            for step in build_chain(lam):
                lo = step.meta["lo"]
                for n in degree_sets(lo).allowed(8):
                    psi = exceptional_hermite(lo, n)
                    eps = 2 * (lo.N - n)
                    (left, right), _ = refine_order(
                        lambda r: np.array(chain_norm_check(step, psi, eps, r)), default_order(n))
                    if left == right == 0.0:
                        assert eps == step.eps0
                    else:
                        worst = max(worst, abs(left / right - 1))
                    count += 1
        info["detail"] = f"{count} eigenpolynomials, max rel err {worst:.2e}"
        assert worst < 1e-8


def test_criterion_10_gapset_roundtrip():
    with criterion("10 gap-set inversion roundtrip") as info:
        count = 0
        for n in range(11):
            for lam in partitions_of(n):
                assert partition_from_gapset(degree_sets(lam).exceptional) == lam
                count += 1
        gapsets = {frozenset(degree_sets(lam).exceptional) for n in range(11) for lam in partitions_of(n)}
        rng = random.Random(1234)
        infeasible = 0
        while infeasible < 100:
            size = rng.randint(1, 8)
            ks = [rng.randint(-2, 15) for _ in range(size)]
            if len(set(ks)) == len(ks) and frozenset(ks) in gapsets:
                continue
            try:
                partition_from_gapset(ks)
            except InfeasibleGapSetError as exc:
                assert exc.reason in ("duplicate", "negative", "sum_mismatch", "non_monotone")
                infeasible += 1
            else:
                raise AssertionError(f"accepted infeasible gap set {ks}")
        info["detail"] = f"{count} roundtrips, {infeasible} structured rejections"
