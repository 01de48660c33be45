"""Multi-index arithmetic on {0,1}^n and Z^n degrees.

Degrees are plain tuples of ints.  The helpers here never care whether a
tuple is a coordinate degree, a momentum degree or a (possibly negative)
vector-field weight.
"""

from __future__ import annotations

from itertools import product
from typing import Iterable, Sequence

from .errors import ValidationError

Degree = tuple[int, ...]


def _check_same_length(i: Sequence[int], j: Sequence[int]) -> None:
    if len(i) != len(j):
        raise ValidationError(f"degree length mismatch: {tuple(i)} vs {tuple(j)}")


def _check_index(n: int, k: int) -> None:
    if not 1 <= k <= n:
        raise ValidationError(f"structure index {k} out of range 1..{n}")


def total(i: Sequence[int]) -> int:
    return sum(i)


def parity(i: Sequence[int]) -> int:
    return sum(i) % 2


def leq(i: Sequence[int], j: Sequence[int]) -> bool:
    """Componentwise order."""
    _check_same_length(i, j)
    return all(a <= b for a, b in zip(i, j))


def add(*degrees: Sequence[int]) -> Degree:
    if not degrees:
        raise ValidationError("add() needs at least one degree")
    out = list(degrees[0])
    for d in degrees[1:]:
        _check_same_length(out, d)
        out = [a + b for a, b in zip(out, d)]
    return tuple(out)


def sub(i: Sequence[int], j: Sequence[int]) -> Degree:
    _check_same_length(i, j)
    return tuple(a - b for a, b in zip(i, j))


def ones(n: int) -> Degree:
    return (1,) * n


def zeros(n: int) -> Degree:
    return (0,) * n


def delta(n: int, k: int) -> Degree:
    """Unit degree with a single 1 in slot ``k`` (1-based)."""
    _check_index(n, k)
    return tuple(1 if s == k - 1 else 0 for s in range(n))


def complement(i: Sequence[int]) -> Degree:
    """``1^n - i``."""
    return tuple(1 - a for a in i)


def bracket_index(n: int, k: int) -> Degree:
    """``[k] = 1^n - delta^k``."""
    return complement(delta(n, k))


def parents(i: Sequence[int]) -> set[Degree]:
    """``{i - delta^k : i_k = 1}``."""
    n = len(i)
    return {sub(i, delta(n, k + 1)) for k in range(n) if i[k] == 1}


def support(i: Sequence[int]) -> tuple[int, ...]:
    """Increasing sequence of 1-based slots k with ``i_k = 1``."""
    return tuple(k + 1 for k, a in enumerate(i) if a == 1)


def is_binary(i: Sequence[int]) -> bool:
    return all(a in (0, 1) for a in i)


def cube(n: int) -> list[Degree]:
    """All of {0,1}^n in the fixed order (total degree, then delta^1 first)."""
    return sorted(product((0, 1), repeat=n), key=order_key)


def order_key(i: Sequence[int]):
    """Sort key for the fixed order on {0,1}^n: total degree, then lexicographic
    with delta^1 before delta^2 before ... ."""
    return (sum(i), tuple(-a for a in i))


def index_utilities(i, j=None, k=None) -> dict:
    """Bundle of the elementary index operations used throughout the package."""
    i = tuple(i)
    n = len(i)
    out = {
        "total": total(i),
        "parity": parity(i),
        "complement": complement(i),
        "parents": parents(i),
    }
    if j is not None:
        out["leq"] = leq(i, j)
        out["sum"] = add(i, j)
    if k is not None:
        out["delta"] = delta(n, k)
        out["bracket"] = bracket_index(n, k)
    return out


def _inversions(seq: Sequence[int]) -> int:
    count = 0
    for a in range(len(seq)):
        for b in range(a + 1, len(seq)):
            if seq[a] > seq[b]:
                count += 1
    return count


def permutation_sign(parts: Iterable[Sequence[int]]) -> int:
    """Sign of the permutation J(i^1)...J(i^r) of the sorted support of the sum.

    The parts must be pairwise disjoint elements of {0,1}^n.
    """
    parts = [tuple(p) for p in parts]
    if not parts:
        return 1
    s = add(*parts)
    if not is_binary(s) or not all(is_binary(p) for p in parts):
        raise ValidationError(f"parts are not disjoint in {{0,1}}^n: {parts}")
    seq = [k for p in parts for k in support(p)]
    return -1 if _inversions(seq) % 2 else 1


def koszul_swap_sign(parts: Sequence[Sequence[int]], perm: Sequence[int]) -> int:
    """Koszul sign of reordering graded symbols of degrees ``parts`` into the
    order ``parts[perm[0]], parts[perm[1]], ...``."""
    par = [parity(p) for p in parts]
    sign = 1
    for a in range(len(perm)):
        for b in range(a + 1, len(perm)):
            if perm[a] > perm[b] and par[perm[a]] and par[perm[b]]:
                sign = -sign
    return sign
