"""Independent brute-force oracles for cross-checking the engines.

Nothing here shares code with the engine search paths: homotopy of maps
is decided by full enumeration of hom-posets after classical beat-point
(core) reduction, covers are enumerated directly over all downsets, and
sections are found by plain backtracking.
"""

from __future__ import annotations

import itertools

INF = float("inf")


# -- beat points and cores ---------------------------------------------------


def _beat_point(poset):
    """Return (index, witness) for some beat point, or None."""
    n = len(poset.elements)
    for i in range(n):
        up = poset.up_mask(i) & ~(1 << i)
        if up:
            mins = [
                j
                for j in range(n)
                if (up >> j) & 1
                and not any(
                    (up >> k) & 1 and k != j and poset.leq_idx(k, j)
                    for k in range(n)
                )
            ]
            if len(mins) == 1 and all(
                poset.leq_idx(mins[0], j) for j in range(n) if (up >> j) & 1
            ):
                return i, mins[0]
        down = poset.down_mask(i) & ~(1 << i)
        if down:
            maxs = [
                j
                for j in range(n)
                if (down >> j) & 1
                and not any(
                    (down >> k) & 1 and k != j and poset.leq_idx(j, k)
                    for k in range(n)
                )
            ]
            if len(maxs) == 1 and all(
                poset.leq_idx(j, maxs[0]) for j in range(n) if (down >> j) & 1
            ):
                return i, maxs[0]
    return None


def core(poset):
    """(core poset, retraction dict element -> element).

    Beat points are removed one at a time; the composite of the one-step
    retractions is homotopic to the identity, which is the classical fact
    the oracle leans on.
    """
    current = poset
    retraction = {x: x for x in poset.elements}
    while True:
        hit = _beat_point(current)
        if hit is None:
            return current, retraction
        i, w = hit
        gone = current.elements[i]
        target = current.elements[w]
        keep = [x for x in current.elements if x != gone]
        for k, v in list(retraction.items()):
            if v == gone:
                retraction[k] = target
        current = current.subposet(keep)


def all_monotone_maps(dom, cod, cap=2_000_000):
    """Every monotone map as a value tuple, by plain backtracking."""
    n = len(dom.elements)
    order = dom.linear_extension()
    out = []
    assign = [0] * n

    def rec(pos):
        if pos == n:
            out.append(tuple(assign))
            if len(out) > cap:
                raise RuntimeError(f"oracle map enumeration passed cap {cap}")
            return
        i = order[pos]
        for v in range(len(cod.elements)):
            ok = True
            for q in range(pos):
                j = order[q]
                if dom.leq_idx(i, j) and not cod.leq_idx(v, assign[j]):
                    ok = False
                elif dom.leq_idx(j, i) and not cod.leq_idx(assign[j], v):
                    ok = False
                if not ok:
                    break
            if ok:
                assign[i] = v
                rec(pos + 1)

    rec(0)
    return out


_COMPONENT_CACHE = {}


def _poset_signature(poset):
    return tuple(poset._up)


def _component_of(dom, cod, start, cap=2_000_000):
    """The homotopy component of a map, as a frozenset of map tuples.

    Moves change a single value to a comparable one; by the interval
    decomposition of the hom-poset, single-point moves reach exactly the
    comparability component, so this is the full homotopy class.
    """
    key = (_poset_signature(dom), _poset_signature(cod))
    comps = _COMPONENT_CACHE.setdefault(key, [])
    for comp in comps:
        if start in comp:
            return comp
    n = len(dom.elements)
    nc = len(cod.elements)
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for m in frontier:
            for i in range(n):
                cur = m[i]
                for v in range(nc):
                    if v == cur:
                        continue
                    if not (cod.leq_idx(cur, v) or cod.leq_idx(v, cur)):
                        continue
                    ok = True
                    for j in range(n):
                        if j == i:
                            continue
                        if dom.leq_idx(i, j) and not cod.leq_idx(v, m[j]):
                            ok = False
                            break
                        if dom.leq_idx(j, i) and not cod.leq_idx(m[j], v):
                            ok = False
                            break
                    if ok:
                        m2 = m[:i] + (v,) + m[i + 1 :]
                        if m2 not in seen:
                            seen.add(m2)
                            nxt.append(m2)
                            if len(seen) > cap:
                                raise RuntimeError(
                                    f"oracle component passed cap {cap}"
                                )
        frontier = nxt
    comp = frozenset(seen)
    comps.append(comp)
    return comp


def maps_homotopic(dom, cod, fvals, gvals, cap=500_000):
    """Decide f ~ g by component search after core reduction of both sides."""
    core_dom, _ = core(dom)
    core_cod, r_cod = core(cod)

    def reduce_map(vals):
        return tuple(
            core_cod.index(r_cod[cod.elements[vals[dom.index(x)]]])
            for x in core_dom.elements
        )

    rf, rg = reduce_map(fvals), reduce_map(gvals)
    if rf == rg:
        return True
    return rg in _component_of(core_dom, core_cod, rf, cap)


def inclusion_nullhomotopic(space, submask, cap=500_000):
    """Is the inclusion of the downset homotopic to a constant map?"""
    elems = space.elements_of_mask(submask)
    sub = space.subposet(elems)
    core_sub, _ = core(sub)
    core_sp, r_sp = core(space)
    incl = tuple(
        core_sp.index(r_sp[x]) for x in core_sub.elements
    )
    comp = _component_of(core_sub, core_sp, incl, cap)
    return any(
        (c,) * len(core_sub.elements) in comp
        for c in range(len(core_sp.elements))
    )


def _maximal_good_downset_masks(space, is_good, downset_cap=300_000):
    """All inclusion-maximal good downsets, by direct enumeration.

    Goodness is hereditary downward and badness upward, so recorded
    verdicts imply verdicts for subsets of good masks and supersets of
    bad ones; masks are walked by decreasing size after seeding the
    verdicts with every point's minimal downset.
    """
    masks = list(space.all_downset_masks(max_count=downset_cap))
    masks.sort(key=lambda m: (-bin(m).count("1"), m))
    good_rec = []
    bad_rec = []

    def known(m):
        for g in good_rec:
            if m & g == m:
                return True
        for b in bad_rec:
            if m & b == b:
                return False
        return None

    def test(m):
        v = known(m)
        if v is not None:
            return v
        v = is_good(m)
        if v:
            good_rec.append(m)
        else:
            bad_rec.append(m)
            bad_rec.sort(key=lambda x: bin(x).count("1"))
        return v

    for i in range(len(space.elements)):
        test(space.down_mask(i))

    kept = []
    for m in masks:
        if m == 0:
            continue
        # non-maximal exactly when a proper good superset is recorded;
        # every good mask sits under some recorded good mask
        if any(m & g == m and m != g for g in good_rec):
            continue
        if test(m):
            kept.append(m)
    out = []
    for m in sorted(kept, key=lambda m: -bin(m).count("1")):
        if not any(m & k == m for k in out):
            out.append(m)
    return out


def _min_cover_brute(universe_mask, sets):
    for k in range(1, len(sets) + 1):
        for combo in itertools.combinations(sets, k):
            u = 0
            for s in combo:
                u |= s
            if u & universe_mask == universe_mask:
                return k
    return INF


def oracle_ls(space, cap=500_000):
    """Plain LS-category: cover X by downsets with nullhomotopic inclusion."""
    n = len(space.elements)
    full = (1 << n) - 1
    if n == 0:
        return 0
    core_x, _ = core(space)
    if len(core_x.elements) == 1 and space.is_path_connected():
        return 1
    good = _maximal_good_downset_masks(
        space, lambda m: inclusion_nullhomotopic(space, m, cap)
    )
    return _min_cover_brute(full, good)


def oracle_cc(space, cap=500_000, downset_cap=300_000):
    """Plain limit motion-planning complexity over X x X.

    Disconnected spaces are infinite outright: a cross-component pair
    admits no combinatorial path, so no downset containing it is good.
    """
    if not space.is_path_connected():
        return INF
    core_x, _ = core(space)
    if len(core_x.elements) == 1:
        # contractible: every map pair is homotopic, one set covers
        return 1
    prod = space.product(space)
    np_ = len(prod.elements)
    full = (1 << np_) - 1
    n = len(space.elements)

    def projections(mask):
        elems = prod.elements_of_mask(mask)
        sub = prod.subposet(elems)
        p1 = tuple(space.index(x) for (x, _) in sub.elements)
        p2 = tuple(space.index(y) for (_, y) in sub.elements)
        return sub, p1, p2

    def good(mask):
        sub, p1, p2 = projections(mask)
        return maps_homotopic(sub, space, p1, p2, cap)

    goods = _maximal_good_downset_masks(prod, good, downset_cap)
    return _min_cover_brute(full, goods)


def oracle_strict_secat(pvals, E, B, cap=500_000):
    """Strict-section sectional category by exhaustive search per downset."""
    nb = len(B.elements)
    full = (1 << nb) - 1
    if nb == 0:
        return 0

    def has_section(mask):
        elems = [i for i in range(nb) if (mask >> i) & 1]
        fibers = [
            [e for e in range(len(E.elements)) if pvals[e] == i] for i in elems
        ]
        if any(not f for f in fibers):
            return False

        def rec(pos, chosen):
            if pos == len(elems):
                return True
            for v in fibers[pos]:
                ok = True
                for q in range(pos):
                    if B.leq_idx(elems[q], elems[pos]) and not E.leq_idx(
                        chosen[q], v
                    ):
                        ok = False
                    elif B.leq_idx(elems[pos], elems[q]) and not E.leq_idx(
                        v, chosen[q]
                    ):
                        ok = False
                    if not ok:
                        break
                if ok and rec(pos + 1, chosen + [v]):
                    return True
            return False

        return rec(0, [])

    goods = _maximal_good_downset_masks(B, has_section)
    return _min_cover_brute(full, goods)


def oracle_section_exists_at_m(space, prod_mask, m):
    """CSP decision: a section of the length-m fibration over the downset.

    Variables H[u][j]; zigzag constraints along J_m, monotonicity along
    the downset, boundary rows pinned to the projections.  Used to check
    the fence engine against a direct formulation.
    """
    prod = space.product(space)
    elems = prod.elements_of_mask(prod_mask)
    sub = prod.subposet(elems)
    k = len(elems)
    n = len(space.elements)
    p1 = [space.index(x) for (x, _) in elems]
    p2 = [space.index(y) for (_, y) in elems]
    cells = [(u, j) for j in range(m + 1) for u in range(k)]
    assign = {}

    def consistent(u, j, v):
        if j == 0 and v != p1[u]:
            return False
        if j == m and v != p2[u]:
            return False
        for (u2, j2), v2 in assign.items():
            if j2 == j and u2 != u:
                if sub.leq_idx(u, u2) and not space.leq_idx(v, v2):
                    return False
                if sub.leq_idx(u2, u) and not space.leq_idx(v2, v):
                    return False
            if u2 == u and abs(j2 - j) == 1:
                jlo = min(j, j2)
                vlo, vhi = (v, v2) if j == jlo else (v2, v)
                # in J_m the even position sits below its odd successor
                lo, hi = (vlo, vhi) if jlo % 2 == 0 else (vhi, vlo)
                if not space.leq_idx(lo, hi):
                    return False
        return True

    def rec(pos):
        if pos == len(cells):
            return True
        u, j = cells[pos]
        for v in range(n):
            if consistent(u, j, v):
                assign[(u, j)] = v
                if rec(pos + 1):
                    return True
                del assign[(u, j)]
        return False

    return rec(0)


# -- exhaustive small posets --------------------------------------------------


def posets_up_to_iso(n):
    """All posets on n labeled points, one per isomorphism class.

    Relations are generated inside the upper triangle of some linear
    extension, transitively closed, then canonicalized over all
    relabelings.
    """
    from equitop.poset import FinitePoset

    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    seen = set()
    out = []
    for bits in range(1 << len(pairs)):
        rel = [[False] * n for _ in range(n)]
        for i in range(n):
            rel[i][i] = True
        for b, (i, j) in enumerate(pairs):
            if (bits >> b) & 1:
                rel[i][j] = True
        for k in range(n):
            for i in range(n):
                if rel[i][k]:
                    for j in range(n):
                        if rel[k][j]:
                            rel[i][j] = True
        key = min(
            tuple(
                rel[perm[i]][perm[j]] for i in range(n) for j in range(n)
            )
            for perm in itertools.permutations(range(n))
        )
        if key in seen:
            continue
        seen.add(key)
        out.append(
            FinitePoset.from_leq_matrix(tuple(range(n)), rel)
        )
    return out
