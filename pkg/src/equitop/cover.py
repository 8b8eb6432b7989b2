"""Maximal good sets and exact minimum set cover.

Both invariant engines reduce to the same shape of problem: a hereditary
goodness predicate on the downset lattice of an orbit poset (every open
invariant set is a downset of orbits and vice versa), a family of maximal
good sets, and an exact minimum cover over them.  Hereditarity is what
makes restricting to maximal candidates sound.
"""

from __future__ import annotations

from .budget import ensure_budget


def maximal_good_downsets(orbit_poset, is_good, budget=None):
    """All maximal good downsets of the orbit poset, deduplicated.

    is_good takes a frozenset of orbit indices (always downward closed)
    and must be hereditary: subsets of good downsets are good.  The
    search branches include/exclude per orbit with an exclusion list, the
    standard enumeration for maximal members of an independence system.
    """
    budget = ensure_budget(budget)
    n = len(orbit_poset.elements)
    down_masks = [orbit_poset.down_mask(i) for i in range(n)]

    def close(mask):
        out = mask
        m = mask
        while m:
            i = (m & -m).bit_length() - 1
            out |= down_masks[i]
            m &= m - 1
        return out

    def to_set(mask):
        return frozenset(i for i in range(n) if (mask >> i) & 1)

    good_cache = {}

    def good(mask):
        got = good_cache.get(mask)
        if got is None:
            got = is_good(to_set(mask))
            good_cache[mask] = got
        return got

    everything = (1 << n) - 1
    if good(everything):
        return [to_set(everything)]

    results = set()

    def rec(r_mask, cand, excl):
        budget.charge()
        ext = [
            o for o in cand
            if not (r_mask >> o) & 1 and good(close(r_mask | (1 << o)))
        ]
        if not ext:
            for o in excl:
                if not (r_mask >> o) & 1 and good(close(r_mask | (1 << o))):
                    return
            results.add(r_mask)
            return
        o = ext[0]
        rest = [p for p in ext if p != o]
        rec(close(r_mask | (1 << o)), rest, excl)
        # the exclude branch can only reach a maximal set if adding o back
        # fails somewhere; when even everything-still-addable plus o stays
        # good, every completion would absorb o, so the branch is dead
        all_mask = r_mask | (1 << o)
        for p in rest:
            all_mask |= 1 << p
        if not good(close(all_mask)):
            rec(r_mask, rest, excl + [o])

    rec(0, list(range(n)), [])
    return sorted(to_set(mask) for mask in results)


def minimum_cover_exact(universe_size, cover_sets, budget=None):
    """Exact minimum cover with a canonical optimal selection.

    cover_sets are frozensets of universe indices whose union contains the
    whole universe.  A branch-and-bound pass pins the optimum size; a
    second lexicographic pass over the canonically sorted candidates
    returns the least cover of that size, so equal-size ties always break
    the same way.
    """
    budget = ensure_budget(budget)
    if universe_size == 0:
        return []
    full = frozenset(range(universe_size))
    order = sorted(range(len(cover_sets)), key=lambda i: sorted(cover_sets[i]))
    sets = [cover_sets[i] for i in order]
    if frozenset().union(*sets) != full:
        raise ValueError("candidate sets do not cover the universe")

    uncovered = set(full)
    best_size = 0
    while uncovered:
        pick = min(range(len(sets)), key=lambda i: (-len(sets[i] & uncovered), i))
        uncovered -= sets[pick]
        best_size += 1

    membership = [
        tuple(i for i in range(len(sets)) if u in sets[i])
        for u in range(universe_size)
    ]
    max_size = max(len(s) for s in sets)

    def rec(num_chosen, covered):
        nonlocal best_size
        budget.charge()
        if covered == full:
            best_size = min(best_size, num_chosen)
            return
        missing = full - covered
        if num_chosen + -(-len(missing) // max_size) >= best_size:
            return
        pivot = min(missing, key=lambda u: (len(membership[u]), u))
        for i in membership[pivot]:
            rec(num_chosen + 1, covered | sets[i])

    rec(0, frozenset())

    # lexicographic pass at the optimum size
    n = len(sets)
    suffix = [frozenset()] * (n + 1)
    for i in range(n - 1, -1, -1):
        suffix[i] = suffix[i + 1] | sets[i]

    def lex(start, chosen, covered):
        if covered == full:
            return chosen
        if len(chosen) == best_size:
            return None
        for i in range(start, n):
            budget.charge()
            if (full - covered) - suffix[i]:
                return None
            got = lex(i + 1, chosen + [i], covered | sets[i])
            if got is not None:
                return got
        return None

    choice = lex(0, [], frozenset())
    if choice is None:
        raise ValueError("internal cover search inconsistency")
    return [order[i] for i in choice]
