"""The combinatorial interval J_m and small standard posets."""

from __future__ import annotations

from .poset import FinitePoset


def combinatorial_interval(m):
    """The zigzag poset J_m on 0..m: 0 < 1 > 2 < 3 > ...

    Even elements sit below their odd neighbours; J_0 is a point and J_1
    is the two-element chain.
    """
    if m < 0:
        raise ValueError("m must be nonnegative")
    covers = []
    for j in range(1, m + 1, 2):
        covers.append((j - 1, j))
        if j + 1 <= m:
            covers.append((j + 1, j))
    return FinitePoset.from_cover_relations(tuple(range(m + 1)), covers)


def chain(n):
    """The n-element chain 0 < 1 < ... < n-1."""
    return FinitePoset.from_cover_relations(
        tuple(range(n)), [(i, i + 1) for i in range(n - 1)]
    )


def antichain(n):
    return FinitePoset.from_cover_relations(tuple(range(n)), [])


def point():
    return FinitePoset.from_cover_relations(("*",), [])
