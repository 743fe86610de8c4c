"""Tree-generating degree sequences.

A list of positive integers ``d_1 <= ... <= d_N`` is the degree sequence of
some tree exactly when it sums to ``2(N - 1)``.  Sequences are stored in
ascending order; every constructor below sorts its input.
"""

from __future__ import annotations

import re
from collections.abc import Iterable, Iterator
from dataclasses import dataclass

from .errors import NotGraphicTree, TooSmall

__all__ = [
    "DegreeSequence",
    "validate_tree_sequence",
    "parse_sequence",
    "enumerate_tree_sequences",
    "partitions_desc",
    "family_ab",
    "family_starlike",
    "is_ab_family",
    "is_starlike",
]


@dataclass(frozen=True)
class DegreeSequence:
    """Validated, ascending tree degree sequence."""

    degrees: tuple[int, ...]

    def __post_init__(self):
        d = self.degrees
        if len(d) < 2:
            raise TooSmall(f"a tree sequence needs at least 2 entries, got {len(d)}")
        if any(x < 1 for x in d):
            raise NotGraphicTree(f"entries must be >= 1: {list(d)}")
        if list(d) != sorted(d):
            raise NotGraphicTree(f"entries must be non-decreasing: {list(d)}")
        if sum(d) != 2 * (len(d) - 1):
            raise NotGraphicTree(
                f"sum {sum(d)} != 2(N-1) = {2 * (len(d) - 1)} for {list(d)}"
            )

    @property
    def order(self) -> int:
        return len(self.degrees)

    @property
    def leaf_count(self) -> int:
        return sum(1 for x in self.degrees if x == 1)

    @property
    def internal_count(self) -> int:
        return self.order - self.leaf_count

    def __len__(self) -> int:
        return len(self.degrees)

    def __iter__(self) -> Iterator[int]:
        return iter(self.degrees)

    def __getitem__(self, i):
        return self.degrees[i]

    def compact(self) -> str:
        """Run-length text form, e.g. ``1^10,2,3,4^2,5``."""
        out = []
        i = 0
        d = self.degrees
        while i < len(d):
            j = i
            while j < len(d) and d[j] == d[i]:
                j += 1
            out.append(str(d[i]) if j - i == 1 else f"{d[i]}^{j - i}")
            i = j
        return ",".join(out)

    def __str__(self) -> str:
        return ",".join(map(str, self.degrees))


def validate_tree_sequence(raw: Iterable[int]) -> DegreeSequence:
    """Sort ``raw`` ascending and check that it generates a tree.

    Raises :class:`TooSmall` for fewer than two entries and
    :class:`NotGraphicTree` for a non-positive entry or a wrong sum.
    """
    vals = [int(x) for x in raw]
    if len(vals) < 2:
        raise TooSmall(f"a tree sequence needs at least 2 entries, got {len(vals)}")
    return DegreeSequence(tuple(sorted(vals)))


_TOKEN = re.compile(r"^\s*(\d+)\s*(?:\^\s*(\d+))?\s*$")


def parse_sequence(text: str) -> DegreeSequence:
    """Parse ``"1^10,2,3,4,4,5"`` style text (``x^k`` repeats ``x`` k times)."""
    vals: list[int] = []
    for tok in text.split(","):
        if not tok.strip():
            continue
        m = _TOKEN.match(tok)
        if m is None:
            raise NotGraphicTree(f"cannot parse sequence token {tok!r}")
        vals.extend([int(m.group(1))] * int(m.group(2) or 1))
    return validate_tree_sequence(vals)


def partitions_desc(n: int, largest: int | None = None) -> Iterator[tuple[int, ...]]:
    """Partitions of ``n`` as non-increasing tuples, reverse-lexicographic."""
    if largest is None:
        largest = n
    if n == 0:
        yield ()
        return
    for k in range(min(n, largest), 0, -1):
        for rest in partitions_desc(n - k, k):
            yield (k,) + rest


def enumerate_tree_sequences(n_vertices: int) -> list[DegreeSequence]:
    """All tree degree sequences of order ``n_vertices``, lexicographic.

    Each sequence is the all-ones vector plus a partition of ``N - 2``
    (padded with zeros), so there are ``p(N - 2)`` of them.
    """
    if n_vertices < 2:
        raise TooSmall(f"order must be >= 2, got {n_vertices}")
    out = []
    for part in partitions_desc(n_vertices - 2):
        extra = sorted(part) if part else []
        pad = n_vertices - len(extra)
        out.append(tuple([1] * pad + [1 + x for x in extra]))
    out.sort()
    return [DegreeSequence(d) for d in out]


def family_ab(a: int, b: int) -> DegreeSequence:
    """``(1^(a+b), 2^a, a+b)``: a hub with ``a`` pendant paths of length 2 and ``b`` leaves."""
    if a < 1 or b < 1:
        raise ValueError(f"family_ab needs a, b >= 1, got ({a}, {b})")
    return DegreeSequence(tuple([1] * (a + b) + [2] * a + [a + b]))


def family_starlike(d: int, k: int) -> DegreeSequence:
    """``(1^d, 2^k, d)``: a spider with ``d`` legs of total length ``d + k``."""
    if d < 3 or k < 0:
        raise ValueError(f"family_starlike needs d >= 3, k >= 0, got ({d}, {k})")
    return DegreeSequence(tuple([1] * d + [2] * k + [d]))


def is_ab_family(seq: DegreeSequence) -> bool:
    """True iff ``seq == family_ab(a, b)`` for some ``a, b >= 1``."""
    d = seq.degrees
    ones = d.count(1)
    twos = d.count(2)
    top = d[-1]
    # P4 = d(1,1) has its hub among the twos.
    if top == 2:
        return d == (1, 1, 2, 2)
    b = ones - twos
    return twos >= 1 and b >= 1 and top == ones and len(d) == ones + twos + 1


def is_starlike(seq: DegreeSequence) -> bool:
    """True iff ``seq`` has the form ``(1^d, 2^k, d)``.

    ``d = 2`` (the path on at least 3 vertices) is included as the
    two-legged spider; :func:`family_starlike` itself requires ``d >= 3``.
    """
    d = seq.degrees
    top = d[-1]
    if top == 2:
        return True
    return top >= 3 and d.count(1) == top and len(d) == top + d.count(2) + 1
