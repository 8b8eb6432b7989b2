"""Equivariant hom-posets and fence (combinatorial homotopy) search.

A combinatorial homotopy between maps f, g: Q -> R is a monotone map
Q x J_m -> R; under the exponential law that is the same thing as a fence
f = f_0, f_1, ..., f_m = g in the hom-poset, alternating up-first
(f_0 <= f_1 >= f_2 <= ...), with equality allowed at every step.  All the
invariant engines reduce to shortest-fence questions, so this module is
where the performance lives.

Two facts keep the search tractable:

  * an equivariant map is determined by its values on orbit
    representatives, and pointwise order of two equivariant maps can be
    read off those representative values alone;

  * every interior map of a fence may be replaced by a maximal (on up
    steps) or minimal (on down steps) map of the hom-poset without
    changing endpoints or length, so BFS only ever needs to walk the
    extremal maps, never the full hom-poset, which can be astronomically
    larger.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .budget import ensure_budget
from .errors import (
    BudgetExceeded,
    MapNotInPoset,
    NotEquivariant,
    NotMonotone,
)
from .groups import GPoset
from .interval import combinatorial_interval
from .poset import FinitePoset, MonotoneMap

FOUND = "found"
UNREACHABLE = "unreachable"
CUTOFF = "cutoff"


def is_equivariant_map(dom_g, cod_g, mapping):
    """Check f(g.x) = g.f(x) for every group element of the shared group."""
    if dom_g.group is not cod_g.group:
        return False
    vals = mapping.values
    for g in range(len(dom_g.group.elements)):
        arow, crow = dom_g.act[g], cod_g.act[g]
        for i in range(len(vals)):
            if vals[arow[i]] != crow[vals[i]]:
                return False
    return True


@dataclass
class FenceCertificate:
    """A verified alternating fence in a hom-poset.

    directions[i] = +1 means maps[i] <= maps[i+1] pointwise, -1 the
    reverse; equality is recorded with the direction the search used.
    """

    maps: list
    directions: list

    def length(self):
        return len(self.directions)

    def verify(self, dom_g=None, cod_g=None):
        for k, d in enumerate(self.directions):
            a, b = self.maps[k], self.maps[k + 1]
            lo, hi = (a, b) if d == +1 else (b, a)
            if not lo.leq(hi):
                return False
        if dom_g is not None and cod_g is not None:
            for m in self.maps:
                if not is_equivariant_map(dom_g, cod_g, m):
                    return False
        for m in self.maps:
            try:
                m._validate()
            except NotMonotone:
                return False
        return True

    def as_payload(self):
        return {
            "length": self.length(),
            "directions": list(self.directions),
            "maps": [
                {str(k): str(v) for k, v in m.as_dict().items()}
                for m in self.maps
            ],
        }


@dataclass
class HomPoset:
    """An explicitly enumerated hom-poset under pointwise order."""

    dom: GPoset
    cod: GPoset
    maps: list
    equivariant: bool = True

    def __len__(self):
        return len(self.maps)

    def index(self, f):
        for i, m in enumerate(self.maps):
            if m.values == f.values:
                return i
        raise MapNotInPoset("map is not a member of this hom-poset")

    def leq(self, i, j):
        return self.maps[i].leq(self.maps[j])


class HomContext:
    """Lazy view of Map_G(U, X): constraints, orders, extremal enumeration.

    dom and cod must carry the same FiniteGroup object.  Maps are handled
    as tuples of cod indices over dom orbit representatives.
    """

    def __init__(self, dom, cod, budget=None):
        if dom.group is not cod.group:
            raise NotEquivariant("hom-poset needs one shared group")
        self.dom = dom
        self.cod = cod
        self.budget = ensure_budget(budget)
        self.group = dom.group
        ng = len(self.group.elements)
        dposet, cposet = dom.poset, cod.poset

        self.reps = [orb[0] for orb in dom.orbit_indices()]
        norb = len(self.reps)
        self.norb = norb

        # transporters: element i = g . rep of its orbit
        self.trans = [dom.transporter(i) for i in range(len(dposet.elements))]

        # allowed values: fixed points of the representative's stabilizer
        allowed = []
        for r in self.reps:
            stab = [g for g in range(ng) if dom.act[g][r] == r]
            vals = tuple(
                v
                for v in range(len(cposet.elements))
                if all(cod.act[g][v] == v for g in stab)
            )
            allowed.append(vals)
        self.allowed = allowed

        # K[a][b] = group elements k with rep_a <= k . rep_b  (a != b)
        K = [[() for _ in range(norb)] for _ in range(norb)]
        for a, ra in enumerate(self.reps):
            for b, rb in enumerate(self.reps):
                if a == b:
                    continue
                ks = tuple(
                    k for k in range(ng) if dposet.leq_idx(ra, dom.act[k][rb])
                )
                K[a][b] = ks
        self.K = K

        # linear extension of the orbit order (orbit a below b iff K[a][b])
        below_count = [0] * norb
        for a in range(norb):
            for b in range(norb):
                if a != b and K[b][a]:
                    below_count[a] += 1
        linext = sorted(range(norb), key=lambda a: (below_count[a], a))
        self.order_min = linext
        self.order_max = list(reversed(linext))

        # per processing position: constraints against already-assigned orbits
        def compile_cons(order, upward):
            cons = []
            seen = []
            for c in order:
                row = []
                for a in seen:
                    if upward:
                        # v_c <= k . v_a for k in K[c][a]
                        for k in K[c][a]:
                            row.append((a, k))
                    else:
                        # v_a <= k . v_c, i.e. inv(k) . v_a <= v_c
                        for k in K[a][c]:
                            row.append((a, self.group.inv[k]))
                cons.append(row)
                seen.append(c)
            return cons

        self.cons_max = compile_cons(self.order_max, upward=True)
        self.cons_min = compile_cons(self.order_min, upward=False)

        self.cod_up = cposet._up
        self.cod_act = cod.act
        self._extremal_cache = {}

    # -- map plumbing ---------------------------------------------------

    def rep_values_of(self, mapping):
        return tuple(mapping.values[r] for r in self.reps)

    def full_values(self, rep_values):
        out = []
        for (k, g) in self.trans:
            out.append(self.cod_act[g][rep_values[k]])
        return tuple(out)

    def to_map(self, rep_values):
        return MonotoneMap(
            self.dom.poset, self.cod.poset, self.full_values(rep_values),
            validate=False,
        )

    def map_leq(self, u, v):
        up = self.cod_up
        for a, b in zip(u, v):
            if not (up[a] >> b) & 1:
                return False
        return True

    def monotone_ok(self, rep_values):
        up = self.cod_up
        act = self.cod_act
        for c in range(self.norb):
            vc = rep_values[c]
            for a in range(self.norb):
                if a == c:
                    continue
                for k in self.K[c][a]:
                    if not (up[vc] >> act[k][rep_values[a]]) & 1:
                        return False
        return True

    # -- enumeration ------------------------------------------------------

    def enumerate_all(self, domains=None, limit=None, first_only=False):
        """All monotone equivariant maps, by backtracking over orbit reps.

        domains optionally restricts the value set per orbit position;
        results come out in lexicographic representative-value order.
        """
        order = list(range(self.norb))
        cons = []
        seen = []
        for c in order:
            row = []
            for a in seen:
                for k in self.K[c][a]:
                    row.append((a, k, True))
                for k in self.K[a][c]:
                    row.append((a, k, False))
            cons.append(row)
            seen.append(c)
        up = self.cod_up
        act = self.cod_act
        assign = [0] * self.norb
        out = []

        def rec(pos):
            if pos == self.norb:
                out.append(tuple(assign))
                if limit is not None and len(out) > limit:
                    raise BudgetExceeded(
                        f"map enumeration passed the limit of {limit}"
                    )
                return first_only
            c = order[pos]
            base = self.allowed[c] if domains is None else domains[c]
            for v in base:
                self.budget.charge()
                ok = True
                for (a, k, upward) in cons[pos]:
                    if upward:
                        if not (up[v] >> act[k][assign[a]]) & 1:
                            ok = False
                            break
                    else:
                        if not (up[assign[a]] >> act[k][v]) & 1:
                            ok = False
                            break
                if ok:
                    assign[c] = v
                    if rec(pos + 1):
                        return True
            return False

        rec(0)
        return out

    def extremal(self, bound, up_direction):
        """Maximal maps >= bound (up) or minimal maps <= bound (down).

        Processing tops-first (resp. bottoms-first) and branching only on
        extremal feasible values enumerates exactly the extremal elements
        of the interval above (below) the bound.
        """
        key = (bound, up_direction)
        cached = self._extremal_cache.get(key)
        if cached is not None:
            return cached
        order = self.order_max if up_direction else self.order_min
        cons = self.cons_max if up_direction else self.cons_min
        up = self.cod_up
        act = self.cod_act
        assign = {}
        out = []

        def rec(pos):
            self.budget.charge()
            if pos == self.norb:
                out.append(tuple(assign[c] for c in range(self.norb)))
                return
            c = order[pos]
            feas = []
            for v in self.allowed[c]:
                if up_direction:
                    if not (up[bound[c]] >> v) & 1:
                        continue
                else:
                    if not (up[v] >> bound[c]) & 1:
                        continue
                ok = True
                for (a, k) in cons[pos]:
                    if up_direction:
                        if not (up[v] >> act[k][assign[a]]) & 1:
                            ok = False
                            break
                    else:
                        if not (up[act[k][assign[a]]] >> v) & 1:
                            ok = False
                            break
                if ok:
                    feas.append(v)
            # keep only values extremal inside the feasible set
            chosen = []
            for v in feas:
                dominated = False
                for w in feas:
                    if w == v:
                        continue
                    if up_direction and (up[v] >> w) & 1:
                        dominated = True
                        break
                    if not up_direction and (up[w] >> v) & 1:
                        dominated = True
                        break
                if not dominated:
                    chosen.append(v)
            for v in chosen:
                assign[c] = v
                rec(pos + 1)
            assign.pop(c, None)

        rec(0)
        self._extremal_cache[key] = out
        return out


@dataclass
class FenceSearchResult:
    status: str
    distance: int | None = None
    fence_values: list | None = None
    fence_directions: list | None = None
    explored: int = 0

    def certificate(self, ctx):
        maps = [ctx.to_map(v) for v in self.fence_values]
        return FenceCertificate(maps, list(self.fence_directions))


def fence_search(
    ctx,
    start,
    *,
    target=None,
    targets=None,
    pattern="up-first",
    max_len=None,
    collect_fence=True,
):
    """Shortest alternating fence from start to a target map.

    target is a single rep-value tuple; targets a list of them (reaching
    any one counts).  Pattern 'up-first' forces f0 <= f1 >= f2 <= ...;
    'free' allows either initial direction.  Returns UNREACHABLE only
    when the whole reachable component was exhausted, which is a verdict
    valid for every fence length.
    """
    goal_list = [target] if target is not None else list(targets)
    if any(start == t for t in goal_list):
        return FenceSearchResult(FOUND, 0, [start], [], explored=0)

    if pattern == "up-first":
        init = [(start, True)]
    elif pattern == "free":
        init = [(start, True), (start, False)]
    else:
        raise ValueError(f"unknown fence pattern {pattern!r}")

    parents = {st: None for st in init}
    frontier = list(init)
    level = 0
    explored = 0
    cut = False

    def finish(state, goal, depth):
        if not collect_fence:
            return FenceSearchResult(FOUND, depth, None, None, explored)
        chain = [goal]
        st = state
        while st is not None:
            chain.append(st[0])
            st = parents[st]
        chain.reverse()
        # the step into the goal has state's pending direction; directions
        # strictly alternate along the fence
        last_up = state[1]
        dirs = [
            +1 if (last_up == ((depth - 1 - i) % 2 == 0)) else -1
            for i in range(depth)
        ]
        return FenceSearchResult(FOUND, depth, chain, dirs, explored)

    while frontier:
        level += 1
        if max_len is not None and level > max_len:
            cut = True
            break
        new_frontier = []
        for st in frontier:
            cur, up_next = st
            for t in goal_list:
                hit = ctx.map_leq(cur, t) if up_next else ctx.map_leq(t, cur)
                if hit:
                    return finish(st, t, level)
            explored += 1
            for nb in ctx.extremal(cur, up_next):
                nst = (nb, not up_next)
                if nst not in parents:
                    parents[nst] = st
                    new_frontier.append(nst)
        frontier = new_frontier
    return FenceSearchResult(CUTOFF if cut else UNREACHABLE, None, None, None, explored)


# -- public operations ----------------------------------------------------


def enumerate_equivariant_maps(A, X, budget=None, limit=None):
    """All monotone equivariant maps A -> X as an explicit HomPoset.

    The count never exceeds #(X) ** #(A/G): each map is pinned down by
    its values on orbit representatives.
    """
    ctx = HomContext(A, X, budget=budget)
    rep_tuples = ctx.enumerate_all(limit=limit)
    maps = [ctx.to_map(v) for v in rep_tuples]
    return HomPoset(A, X, maps, equivariant=True)


def fence_distance(hom, f, g, pattern="up-first", max_len=None):
    """Minimal alternating fence length between members of a HomPoset.

    Returns the length, or None when no fence of length <= max_len exists
    (None with max_len=None means unreachable outright).
    """
    fi, gi = hom.index(f), hom.index(g)
    n = len(hom.maps)
    leq = {}

    def le(i, j):
        got = leq.get((i, j))
        if got is None:
            got = hom.maps[i].leq(hom.maps[j])
            leq[(i, j)] = got
        return got

    if fi == gi:
        return 0
    if pattern == "up-first":
        init = [(fi, True)]
    elif pattern == "free":
        init = [(fi, True), (fi, False)]
    else:
        raise ValueError(f"unknown fence pattern {pattern!r}")
    seen = set(init)
    frontier = list(init)
    level = 0
    while frontier:
        level += 1
        if max_len is not None and level > max_len:
            return None
        nxt = []
        for (i, up_next) in frontier:
            if (le(i, gi) if up_next else le(gi, i)):
                return level
            for j in range(n):
                if j == i:
                    continue
                if le(i, j) if up_next else le(j, i):
                    st = (j, not up_next)
                    if st not in seen:
                        seen.add(st)
                        nxt.append(st)
        frontier = nxt
    return None


@dataclass
class PathSpace:
    """X^{J_m} with its pointwise action and the endpoint fibration q_m."""

    base: GPoset
    space: GPoset
    m: int
    diagonal: GPoset
    fibration: MonotoneMap


def path_space(X, m, budget=None):
    """All combinatorial paths J_m -> X, with q_m(a) = (a(0), a(m))."""
    budget = ensure_budget(budget)
    poset = X.poset
    n = len(poset.elements)
    paths = []

    def rec(seq):
        j = len(seq)
        if j == m + 1:
            paths.append(tuple(seq))
            budget.charge()
            return
        if j == 0:
            for v in range(n):
                rec([v])
            return
        prev = seq[-1]
        # even positions sit below odd ones in J_m
        mask = poset.up_mask(prev) if j % 2 == 1 else poset.down_mask(prev)
        mm = mask
        while mm:
            v = (mm & -mm).bit_length() - 1
            seq.append(v)
            rec(seq)
            seq.pop()
            mm &= mm - 1

    rec([])
    budget.check_size(len(paths), "path space")
    names = [tuple(poset.elements[v] for v in p) for p in paths]
    up = []
    for p in paths:
        mask = 0
        for qi, q in enumerate(paths):
            if all((poset.up_mask(a) >> b) & 1 for a, b in zip(p, q)):
                mask |= 1 << qi
        up.append(mask)
    space_poset = FinitePoset(names, up, _validated=True)
    index = {p: i for i, p in enumerate(paths)}
    act = []
    for g in range(len(X.group.elements)):
        row = X.act[g]
        act.append(tuple(index[tuple(row[v] for v in p)] for p in paths))
    space = GPoset(space_poset, X.group, act, _validated=True)
    diag = X.diagonal()
    values = tuple(p[0] * n + p[m] for p in paths)
    fib = MonotoneMap(space_poset, diag.poset, values)
    return PathSpace(X, space, m, diag, fib)


def curry(H, U, ps):
    """Turn a homotopy H: U x J_m -> X into a section-shaped map U -> X^{J_m}."""
    m = ps.m
    pos = {e: i for i, e in enumerate(H.dom.elements)}
    cod_index = {e: i for i, e in enumerate(ps.space.poset.elements)}
    xposet = H.cod
    values = []
    for u in U.poset.elements:
        pathname = tuple(
            xposet.elements[H.values[pos[(u, j)]]] for j in range(m + 1)
        )
        if pathname not in cod_index:
            raise NotMonotone("homotopy slice is not a combinatorial path")
        values.append(cod_index[pathname])
    return MonotoneMap(U.poset, ps.space.poset, tuple(values))


def uncurry(s, U, ps):
    """Inverse of curry: rebuild the homotopy on U x J_m from a path map."""
    m = ps.m
    jm = combinatorial_interval(m)
    prod = U.poset.product(jm)
    path_names = ps.space.poset.elements
    xposet = ps.base.poset
    values = []
    for (u, j) in prod.elements:
        path = path_names[s.values[U.poset.index(u)]]
        values.append(xposet.index(path[j]))
    return MonotoneMap(prod, xposet, tuple(values))
