"""Partition combinatorics behind the exceptional Hermite families.

Covers gap (exceptional) degree sets, allowed and sporadic degrees, the
truncation chain lambda -> lambda^(j), conjugation, evenness, and the
inverse map from a gap set back to its partition.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import count, islice
from typing import Iterable, Iterator, Sequence

from .errors import InfeasibleGapSetError, PartitionValidationError

__all__ = [
    "DegreeSets",
    "Partition",
    "chain_lengths",
    "conjugate",
    "even_partitions_of",
    "degree_sets",
    "is_even",
    "make_partition",
    "parse_partition",
    "partition_from_gapset",
    "partitions_of",
    "truncate",
]


@dataclass(frozen=True, order=True)
class Partition:
    """Non-increasing tuple of positive parts (no trailing zeros)."""

    parts: tuple[int, ...] = ()

    def __post_init__(self):
        p = self.parts
        if any(not isinstance(v, int) or v < 1 for v in p):
            raise PartitionValidationError(f"parts must be positive integers: {p}")
        if any(p[i] < p[i + 1] for i in range(len(p) - 1)):
            raise PartitionValidationError(f"parts must be non-increasing: {p}")

    @property
    def N(self) -> int:
        return sum(self.parts)

    @property
    def ell(self) -> int:
        return len(self.parts)

    @property
    def first(self) -> int:
        """lambda_1, the largest part (0 for the empty partition)."""
        return self.parts[0] if self.parts else 0

    def part(self, i: int) -> int:
        """lambda_i with 1-based index, zero beyond the length."""
        return self.parts[i - 1] if 1 <= i <= len(self.parts) else 0

    def __iter__(self):
        return iter(self.parts)

    def __len__(self):
        return len(self.parts)

    def __str__(self):
        return "(" + ",".join(map(str, self.parts)) + ")" if self.parts else "()"

    def to_text(self) -> str:
        return ",".join(map(str, self.parts))


def make_partition(values: Iterable[int]) -> Partition:
    vals = [int(v) for v in values]
    for i, v in enumerate(vals):
        if v < 0:
            raise PartitionValidationError(f"negative entry {v} at position {i + 1}")
        if i + 1 < len(vals) and v < vals[i + 1]:
            raise PartitionValidationError(
                f"sequence increases at position {i + 1}: {v} < {vals[i + 1]}"
            )
    while vals and vals[-1] == 0:
        vals.pop()
    return Partition(tuple(vals))


def parse_partition(text: str) -> Partition:
    """Parse comma-separated parts, e.g. ``"3,3,1,1"``; empty text is the empty partition."""
    text = text.strip().strip("()")
    if not text:
        return Partition()
    try:
        vals = [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise PartitionValidationError(f"cannot parse partition {text!r}") from None
    return make_partition(vals)


def is_even(lam: Partition) -> bool:
    p = lam.parts
    return len(p) % 2 == 0 and all(p[i] == p[i + 1] for i in range(0, len(p), 2))


def conjugate(lam: Partition) -> Partition:
    return Partition(tuple(sum(1 for v in lam.parts if v >= j) for j in range(1, lam.first + 1)))


def truncate(lam: Partition, j: int) -> Partition:
    """lambda^(j): subtract j from every part, dropping what falls to zero."""
    if j < 0:
        raise PartitionValidationError("truncation index must be non-negative")
    return Partition(tuple(v - j for v in lam.parts if v > j))


@dataclass(frozen=True)
class DegreeSets:
    """Exceptional degrees K, sporadic degrees, and the (infinite) allowed set.

    The allowed set is the complement of ``exceptional`` in the
    non-negative integers; every degree >= lambda_1 + N is allowed.
    """

    exceptional: tuple[int, ...]
    sporadic: tuple[int, ...]
    first_regular: int = 0
    _exc: frozenset = field(default=frozenset(), repr=False, compare=False)

    def is_allowed(self, n: int) -> bool:
        return n >= 0 and n not in self._exc

    def allowed(self, cutoff: int | None = None) -> list[int]:
        """Allowed degrees up to ``cutoff`` inclusive (default lambda_1 + N + 16)."""
        if cutoff is None:
            cutoff = self.first_regular + 16
        return [n for n in range(cutoff + 1) if n not in self._exc]

    def iter_allowed(self) -> Iterator[int]:
        return (n for n in count() if n not in self._exc)


def degree_sets(lam: Partition) -> DegreeSets:
    N, ell = lam.N, lam.ell
    ks = [lam.part(i) + N - i for i in range(1, N + 1)]
    exc = frozenset(ks)
    # union form: {0..N-ell-1} together with the shifted m_i
    alt = set(range(N - ell)) | {lam.part(i) + ell - i + N - ell for i in range(1, ell + 1)}
    assert alt == exc, (alt, exc)
    top = lam.first + N
    spor = tuple(n for n in range(top) if n not in exc)
    assert len(spor) == lam.first
    return DegreeSets(tuple(sorted(ks)), spor, top, exc)


def partition_from_gapset(K: Iterable[int]) -> Partition:
    """Recover lambda from its exceptional degrees via lambda_i = k_i + i - N."""
    ks = list(K)
    if len(set(ks)) != len(ks):
        raise InfeasibleGapSetError("duplicate", f"gap set has repeated entries: {sorted(ks)}")
    if any(k < 0 for k in ks):
        raise InfeasibleGapSetError("negative", f"gap set has negative entries: {sorted(ks)}")
    N = len(ks)
    s, target = sum(ks), N * (N + 1) // 2
    if s != target:
        raise InfeasibleGapSetError(
            "sum_mismatch", f"sum of gap set is {s}, expected N(N+1)/2 = {target} for N = {N}"
        )
    ks.sort(reverse=True)
    vals = [k + i - N for i, k in enumerate(ks, start=1)]
    if any(v < 0 for v in vals) or any(vals[i] < vals[i + 1] for i in range(N - 1)):
        raise InfeasibleGapSetError("non_monotone", f"recovered sequence {vals} is not a partition")
    lam = make_partition(vals)
    if set(degree_sets(lam).exceptional) != set(ks):
        raise InfeasibleGapSetError("non_monotone", f"gap set does not round-trip through {lam}")
    return lam


def chain_lengths(lam: Partition) -> list[tuple[int, int, int]]:
    """Triples (j, ell_j, n_{j+1}) for j < lambda_1.

    ell_j is the length of lambda^(j), n_{j+1} the (j+1)-th smallest
    allowed degree; ell_j = N - n_{j+1} + j is checked for each row.
    """
    ds = degree_sets(lam)
    rows = []
    for j, n in zip(range(lam.first), ds.iter_allowed()):
        ell_j = truncate(lam, j).ell
        assert ell_j == lam.N - n + j, (lam, j, ell_j, n)
        rows.append((j, ell_j, n))
    return rows


def truncation_lengths(lam: Partition, upto: int | None = None) -> list[int]:
    """Lengths of lambda^(0), lambda^(1), ..., lambda^(upto)."""
    upto = lam.first if upto is None else upto
    return [truncate(lam, j).ell for j in range(upto + 1)]


def partitions_of(n: int, max_part: int | None = None) -> Iterator[Partition]:
    """All partitions of n, largest parts first."""
    if max_part is None:
        max_part = n
    if n == 0:
        yield Partition()
        return
    for first in range(min(n, max_part), 0, -1):
        for rest in partitions_of(n - first, first):
            yield Partition((first,) + rest.parts)


def even_partitions_of(n: int) -> Iterator[Partition]:
    if n % 2:
        return
    for p in partitions_of(n // 2):
        yield Partition(tuple(v for v in p.parts for _ in range(2)))


def allowed_prefix(lam: Partition, k: int) -> list[int]:
    """The k smallest allowed degrees."""
    return list(islice(degree_sets(lam).iter_allowed(), k))


def gapset_multiset_identity(lam: Partition) -> tuple[list[int], list[int]]:
    """Both sides of {lambda_i - i} + {j - ell_j} = {-N, ..., lambda_1 - 1} as sorted lists."""
    left = [lam.part(i) - i for i in range(1, lam.N + 1)]
    left += [j - truncate(lam, j).ell for j in range(lam.first)]
    return sorted(left), list(range(-lam.N, lam.first))
