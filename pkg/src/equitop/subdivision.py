"""Barycentric subdivision of G-posets and the order-two contraction.

Elements of sd(X) are the nonempty chains of X, ordered by inclusion,
with the action applied memberwise.  Chains are canonically encoded as
tuples sorted by the order of X, and the element list of sd(X) is sorted
by (length, index tuple), so subdivisions are deterministic.
"""

from __future__ import annotations

from .budget import ensure_budget
from .errors import ConstructionFailed, NotEquivariant, UnknownElement
from .groups import GPoset
from .homotopy import FenceCertificate, is_equivariant_map
from .poset import FinitePoset, MonotoneMap


def enumerate_chain_index_tuples(poset, budget=None):
    """All nonempty chains as index tuples ascending in the poset order."""
    budget = ensure_budget(budget)
    n = len(poset.elements)
    chains = []

    def rec(chain, top):
        chains.append(tuple(chain))
        budget.charge()
        m = poset.up_mask(top) & ~(1 << top)
        while m:
            j = (m & -m).bit_length() - 1
            chain.append(j)
            rec(chain, j)
            chain.pop()
            m &= m - 1

    for i in range(n):
        rec([i], i)
    chains.sort(key=lambda c: (len(c), c))
    return chains


def subdivide(X, budget=None):
    """sd(X): chains of X under inclusion, with the memberwise action."""
    budget = ensure_budget(budget)
    poset = X.poset
    chains = enumerate_chain_index_tuples(poset, budget)
    budget.check_size(len(chains), "subdivision")
    names = [tuple(poset.elements[i] for i in c) for c in chains]
    chain_sets = [frozenset(c) for c in chains]
    index = {s: k for k, s in enumerate(chain_sets)}
    up = []
    for k, s in enumerate(chain_sets):
        mask = 0
        for k2, s2 in enumerate(chain_sets):
            if s <= s2:
                mask |= 1 << k2
        up.append(mask)
    sd_poset = FinitePoset(names, up, _validated=True)
    act = []
    for g in range(len(X.group.elements)):
        row = X.act[g]
        act.append(
            tuple(index[frozenset(row[i] for i in c)] for c in chains)
        )
    return GPoset(sd_poset, X.group, act, _validated=True)


def subdivide_n(X, n, budget=None):
    if n < 0:
        raise ValueError("n must be nonnegative")
    out = X
    for _ in range(n):
        out = subdivide(out, budget)
    return out


def last_vertex_map(X, sd_X=None, budget=None):
    """The monotone, equivariant map sd(X) -> X sending a chain to its top."""
    if sd_X is None:
        sd_X = subdivide(X, budget)
    poset = X.poset
    values = []
    for name in sd_X.poset.elements:
        members = [poset.index(v) for v in name]
        top = members[0]
        for i in members[1:]:
            if poset.leq_idx(top, i):
                top = i
        values.append(top)
    tau = MonotoneMap(sd_X.poset, poset, tuple(values))
    if not is_equivariant_map(sd_X, X, tau):
        raise ConstructionFailed("last-vertex map failed its equivariance check")
    return tau


def fixed_points_commute_check(X, n, budget=None):
    """sd^n(X^G) and sd^n(X)^G are the same poset, element for element.

    A chain is fixed exactly when each member is, because an order
    automorphism preserving a finite chain fixes it pointwise; the check
    compares canonical element sets and their order matrices.
    """
    from .groups import Subgroup

    H = Subgroup.whole(X.group)
    fixed = X.fixed_points(H)
    fixed_g = GPoset.trivial(fixed)
    lhs = subdivide_n(fixed_g, n, budget).poset

    sd_x = subdivide_n(X, n, budget)
    Hn = Subgroup.whole(sd_x.group)
    rhs = sd_x.fixed_points(Hn)

    if set(lhs.elements) != set(rhs.elements):
        return False
    for a in lhs.elements:
        for b in lhs.elements:
            if lhs.leq(a, b) != rhs.leq(a, b):
                return False
    return True


def _chain_sizes(name):
    return tuple(len(member) for member in name)


def sd2_categorical_certificate(X, S, sd1=None, sd2=None, budget=None):
    """An explicit no-search fence contracting G.(down-closure of S).

    S is an element of sd(sd(X)): a chain of chains s_1 < ... < s_n.  The
    fence starts at the inclusion of the saturated minimal open set G.U_S
    and ends at a map whose image is a single orbit, witnessing that the
    set is categorical.  Every intermediate map is re-verified monotone
    and equivariant; a violation raises ConstructionFailed because the
    construction is guaranteed to succeed on valid input.
    """
    budget = ensure_budget(budget)
    if sd1 is None:
        sd1 = subdivide(X, budget)
    if sd2 is None:
        sd2 = subdivide(sd1, budget)
    poset2 = sd2.poset
    if S not in poset2:
        raise UnknownElement(f"{S!r} is not an element of the double subdivision")

    s_idx = poset2.index(S)
    # members of S, as sd1 chains ordered by inclusion
    members = sorted(S, key=len)
    sizes = [len(m) for m in members]
    if len(set(sizes)) != len(sizes):
        raise ConstructionFailed("chain members must have distinct sizes")

    dmask = sd2.saturate_mask(poset2.down_mask(s_idx))
    U = sd2.subgposet_mask(dmask)
    incl = MonotoneMap.inclusion(U.poset, poset2)

    def find_translate(w_name, member):
        """Group element g with g . member appearing inside the chain w."""
        size = len(member)
        hits = [part for part in w_name if len(part) == size]
        if not hits:
            return None, None
        part = hits[0]
        midx = sd1.poset.index(member)
        for g in range(len(X.group.elements)):
            if sd1.poset.elements[sd1.act[g][midx]] == part:
                return g, part
        raise ConstructionFailed("saturation bookkeeping is inconsistent")

    def apply_name(g, name):
        i = poset2.index(name)
        return poset2.elements[sd2.act[g][i]]

    maps = [incl]
    directions = []
    current = list(incl.values)

    for stage in range(len(members) - 1, 0, -1):
        top = members[stage]
        prefix = tuple(members[: stage + 1])
        # promote: anything whose chain contains a translate of the stage
        # top gets sent to that translate of the whole stage prefix
        promoted = list(current)
        for p, vi in enumerate(current):
            w = poset2.elements[vi]
            g, part = find_translate(w, top)
            if g is not None:
                promoted[p] = poset2.index(apply_name(g, prefix))
        f1 = MonotoneMap(U.poset, poset2, tuple(promoted))
        # drop: remove the stage-top translate from every chain again
        dropped = list(promoted)
        for p, vi in enumerate(promoted):
            w = poset2.elements[vi]
            keep = tuple(part for part in w if len(part) != len(top))
            if not keep:
                raise ConstructionFailed(
                    "contraction emptied a chain; stage discipline broken"
                )
            if len(keep) != len(w):
                dropped[p] = poset2.index(keep)
        f2 = MonotoneMap(U.poset, poset2, tuple(dropped))

        for mp in (f1, f2):
            if not is_equivariant_map(U, sd2, mp):
                raise ConstructionFailed("stage map failed equivariance check")
        prev = maps[-1]
        if not prev.leq(f1):
            raise ConstructionFailed("promotion step is not an up-step")
        if not f2.leq(f1):
            raise ConstructionFailed("drop step is not a down-step")
        maps.extend([f1, f2])
        directions.extend([+1, -1])
        current = dropped

    final = maps[-1]
    image = {poset2.elements[v] for v in final.values}
    orbit = set(sd2.orbit(poset2.elements[final.values[0]]))
    if not image <= orbit:
        raise ConstructionFailed("final map does not land in a single orbit")
    cert = FenceCertificate(maps, directions)
    if not cert.verify(U, sd2):
        raise ConstructionFailed("assembled fence failed re-verification")
    return cert
