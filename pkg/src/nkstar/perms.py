"""k-permutations on {1..n}: counting, lexicographic enumeration, ranking.

A k-permutation is represented as a plain tuple of k distinct symbols from
{1..n}, always 1-based.  The lexicographic order of these tuples is the
canonical vertex order everywhere in this package: the *rank* of a
permutation is its position in that order and doubles as the dense vertex ID
of the corresponding (n,k)-star graph vertex.
"""

from __future__ import annotations

import math
from itertools import permutations as _iter_permutations
from typing import Iterator

from .errors import DomainError

KPerm = tuple[int, ...]


def _check_nk(n: int, k: int) -> None:
    if not 1 <= k <= n:
        raise DomainError(f"need 1 <= k <= n, got n={n}, k={k}")


def count(n: int, k: int) -> int:
    """Number of k-permutations on {1..n}, i.e. n!/(n-k)!."""
    _check_nk(n, k)
    return math.perm(n, k)


def iter_perms(n: int, k: int) -> Iterator[KPerm]:
    """Yield all k-permutations on {1..n} in lexicographic order."""
    _check_nk(n, k)
    return _iter_permutations(range(1, n + 1), k)


def all_perms(n: int, k: int) -> list[KPerm]:
    """All k-permutations on {1..n}, lexicographically sorted."""
    return list(iter_perms(n, k))


def validate_perm(n: int, p: KPerm) -> None:
    """Raise DomainError unless ``p`` is a valid k-permutation on {1..n}."""
    if not 1 <= len(p) <= n:
        raise DomainError(f"permutation length {len(p)} not in 1..{n}")
    seen = set()
    for s in p:
        if not 1 <= s <= n:
            raise DomainError(f"symbol {s} outside 1..{n} in {p}")
        if s in seen:
            raise DomainError(f"repeated symbol {s} in {p}")
        seen.add(s)


def rank(n: int, p: KPerm) -> int:
    """Position of ``p`` in the lexicographic order of len(p)-permutations."""
    validate_perm(n, p)
    k = len(p)
    used = [False] * (n + 1)
    r = 0
    for i, s in enumerate(p):
        smaller = sum(1 for t in range(1, s) if not used[t])
        r += smaller * math.perm(n - 1 - i, k - 1 - i)
        used[s] = True
    return r


def unrank(n: int, k: int, r: int) -> KPerm:
    """Inverse of :func:`rank`: the k-permutation at position ``r``."""
    total = count(n, k)
    if not 0 <= r < total:
        raise DomainError(f"rank {r} outside 0..{total - 1} for (n={n}, k={k})")
    avail = list(range(1, n + 1))
    out = []
    for i in range(k):
        block = math.perm(n - 1 - i, k - 1 - i)
        j, r = divmod(r, block)
        out.append(avail.pop(j))
    return tuple(out)


def perm_text(p: KPerm) -> str:
    """Textual form of a permutation: comma-separated symbols, e.g. "3,1,2"."""
    return ",".join(str(s) for s in p)


def parse_perm(text: str) -> KPerm:
    """Parse the comma-separated textual form back into a tuple.

    Only syntax is checked here; range/distinctness validation needs n and is
    done by :func:`validate_perm`.
    """
    parts = [piece.strip() for piece in text.split(",")]
    try:
        return tuple(int(piece) for piece in parts)
    except ValueError:
        raise DomainError(f"not a comma-separated permutation: {text!r}") from None
