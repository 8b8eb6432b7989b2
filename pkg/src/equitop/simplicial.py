"""Simplicial complexes, ordered G-complexes, contiguity, and transfers.

Everything combinatorial about realizations happens here: order
complexes and face posets translate between the poset and simplicial
worlds, the staircase product triangulates products of ordered
complexes, and contiguity chains play the role of homotopies between
simplicial maps.
"""

from __future__ import annotations

from dataclasses import dataclass

from .budget import ensure_budget
from .errors import (
    BudgetExceeded,
    NotEquivariant,
    NotMonotone,
    NotSimplicial,
    UnknownElement,
)
from .groups import FiniteGroup, GPoset, Subgroup, all_subgroups
from .poset import FinitePoset


def _canon(simplex, vertex_index):
    return tuple(sorted(set(simplex), key=lambda v: vertex_index[v]))


class SimplicialComplex:
    """A finite abstract simplicial complex over named vertices."""

    __slots__ = ("vertices", "_vindex", "simplices", "_simplex_set")

    def __init__(self, vertices, simplices, _validated=False):
        self.vertices = tuple(vertices)
        self._vindex = {v: i for i, v in enumerate(self.vertices)}
        if len(self._vindex) != len(self.vertices):
            raise UnknownElement("duplicate vertex identifiers")
        canon = set()
        for s in simplices:
            if not s:
                raise NotSimplicial("the empty set is not a simplex")
            for v in s:
                if v not in self._vindex:
                    raise UnknownElement(f"unknown vertex {v!r} in a simplex")
            canon.add(_canon(s, self._vindex))
        for v in self.vertices:
            canon.add((v,))
        if not _validated:
            # close under nonempty faces
            stack = list(canon)
            while stack:
                s = stack.pop()
                if len(s) > 1:
                    for i in range(len(s)):
                        face = s[:i] + s[i + 1 :]
                        if face not in canon:
                            canon.add(face)
                            stack.append(face)
        self.simplices = tuple(sorted(canon, key=lambda s: (len(s), s)))
        self._simplex_set = frozenset(canon)

    def __len__(self):
        return len(self.simplices)

    def is_simplex(self, s):
        return _canon(s, self._vindex) in self._simplex_set

    def maximal_simplices(self):
        out = []
        for s in self.simplices:
            ss = set(s)
            if not any(ss < set(t) for t in self.simplices):
                out.append(s)
        return out

    def vertex_index(self, v):
        try:
            return self._vindex[v]
        except KeyError:
            raise UnknownElement(f"unknown vertex {v!r}") from None

    def __repr__(self):
        return (
            f"SimplicialComplex({len(self.vertices)} vertices, "
            f"{len(self.simplices)} simplices)"
        )


def standard_simplex(n):
    """The full simplex on vertices 0..n, ordered as a chain."""
    verts = tuple(range(n + 1))
    return SimplicialComplex(verts, [verts], _validated=False)


class SimplicialMap:
    """A vertex map whose image of every simplex is a simplex."""

    __slots__ = ("dom", "cod", "values")

    def __init__(self, dom, cod, values, validate=True):
        self.dom = dom
        self.cod = cod
        self.values = tuple(values)
        if len(self.values) != len(dom.vertices):
            raise NotSimplicial("vertex assignment must be total")
        if validate:
            for s in dom.maximal_simplices():
                image = {self.values[dom.vertex_index(v)] for v in s}
                if not cod.is_simplex(
                    [cod.vertices[i] for i in image]
                ):
                    raise NotSimplicial(
                        f"image of simplex {s!r} is not a simplex"
                    )

    @classmethod
    def from_dict(cls, dom, cod, mapping, validate=True):
        values = tuple(
            cod.vertex_index(mapping[v]) for v in dom.vertices
        )
        return cls(dom, cod, values, validate=validate)

    def __call__(self, v):
        return self.cod.vertices[self.values[self.dom.vertex_index(v)]]

    def image_simplex(self, s):
        return tuple(
            sorted(
                {self.values[self.dom.vertex_index(v)] for v in s}
            )
        )

    def as_dict(self):
        return {
            v: self.cod.vertices[self.values[i]]
            for i, v in enumerate(self.dom.vertices)
        }

    def compose(self, other):
        values = tuple(self.values[v] for v in other.values)
        return SimplicialMap(other.dom, self.cod, values, validate=False)

    def __eq__(self, other):
        return (
            isinstance(other, SimplicialMap)
            and self.dom is other.dom
            and self.cod is other.cod
            and self.values == other.values
        )

    def __hash__(self):
        return hash(self.values)


class OrderedGComplex:
    """A simplicial complex whose vertex order totally orders each simplex,
    with a monotone simplicial action of a finite group."""

    __slots__ = ("complex", "vertex_poset", "group", "act")

    def __init__(self, complex_, vertex_poset, group, act, _validated=False):
        self.complex = complex_
        self.vertex_poset = vertex_poset
        self.group = group
        self.act = tuple(tuple(row) for row in act)
        if not _validated:
            self._validate()

    def _validate(self):
        K, P = self.complex, self.vertex_poset
        if tuple(P.elements) != tuple(K.vertices):
            raise NotMonotone("vertex order must list exactly the vertices")
        for s in K.maximal_simplices():
            idx = [P.index(v) for v in s]
            for a in idx:
                for b in idx:
                    if a != b and not (P.leq_idx(a, b) or P.leq_idx(b, a)):
                        raise NotMonotone(
                            f"simplex {s!r} is not totally ordered"
                        )
        ng = len(self.group.elements)
        n = len(K.vertices)
        if len(self.act) != ng or any(len(r) != n for r in self.act):
            raise NotEquivariant("action table has wrong shape")
        gposet = GPoset(P, self.group, self.act)  # checks monotone bijections
        for g in range(ng):
            row = self.act[g]
            for s in K.maximal_simplices():
                img = [K.vertices[row[K.vertex_index(v)]] for v in s]
                if not K.is_simplex(img):
                    raise NotSimplicial(
                        f"group element {self.group.elements[g]!r} is not simplicial"
                    )

    @classmethod
    def trivial_order_free(cls, complex_, order_pairs=(), generators=None):
        """Build from cover pairs on vertices and named vertex permutations."""
        poset = FinitePoset.from_cover_relations(complex_.vertices, order_pairs)
        if generators:
            gp = GPoset.from_generator_perms(poset, generators)
            return cls(complex_, poset, gp.group, gp.act)
        return cls(
            complex_,
            poset,
            FiniteGroup.trivial(),
            (tuple(range(len(complex_.vertices))),),
        )

    def vertex_gposet(self):
        return GPoset(self.vertex_poset, self.group, self.act, _validated=True)

    def simplex_orbit(self, s):
        K = self.complex
        out = set()
        for row in self.act:
            out.add(
                _canon(
                    [K.vertices[row[K.vertex_index(v)]] for v in s], K._vindex
                )
            )
        return tuple(sorted(out, key=lambda t: (len(t), t)))

    def __repr__(self):
        return (
            f"OrderedGComplex({len(self.complex.vertices)} vertices, "
            f"{len(self.complex.simplices)} simplices, "
            f"group order {len(self.group.elements)})"
        )


# -- translations between posets and complexes ------------------------------


def order_complex(X):
    """K(P): simplices are the nonempty chains of the poset."""
    from .subdivision import enumerate_chain_index_tuples

    poset = X.poset
    chains = enumerate_chain_index_tuples(poset)
    simplices = [tuple(poset.elements[i] for i in c) for c in chains]
    K = SimplicialComplex(poset.elements, simplices, _validated=True)
    return OrderedGComplex(K, poset, X.group, X.act, _validated=True)


def face_poset(K):
    """chi(K): the simplices of K ordered by inclusion."""
    simplices = K.simplices
    sets = [frozenset(s) for s in simplices]
    up = []
    for s in sets:
        mask = 0
        for j, t in enumerate(sets):
            if s <= t:
                mask |= 1 << j
        up.append(mask)
    return FinitePoset(simplices, up, _validated=True)


def face_gposet(K):
    """chi(K) with the induced action on simplices."""
    poset = face_poset(K.complex)
    index = {s: i for i, s in enumerate(poset.elements)}
    act = []
    C = K.complex
    for row in K.act:
        act.append(
            tuple(
                index[
                    _canon(
                        [C.vertices[row[C.vertex_index(v)]] for v in s],
                        C._vindex,
                    )
                ]
                for s in poset.elements
            )
        )
    return GPoset(poset, K.group, act, _validated=True)


def sd_complex(K, budget=None):
    """Barycentric subdivision: the order complex of the face poset.

    The result is always an ordered G-complex, whatever the input order
    was; that is why unordered complexes are subdivided once before any
    contiguity computation.
    """
    budget = ensure_budget(budget)
    fp = face_gposet(K)
    budget.check_size(len(fp.poset.elements), "subdivision vertex set")
    return order_complex(fp)


# -- contiguity --------------------------------------------------------------


def one_contiguous(phi, psi):
    """phi(s) united with psi(s) is a simplex, for every simplex s."""
    if phi.dom is not psi.dom or phi.cod is not psi.cod:
        raise NotSimplicial("contiguity needs a shared domain and codomain")
    dom, cod = phi.dom, phi.cod
    for s in dom.maximal_simplices():
        img = {phi.values[dom.vertex_index(v)] for v in s}
        img |= {psi.values[dom.vertex_index(v)] for v in s}
        if not cod.is_simplex([cod.vertices[i] for i in img]):
            return False
    return True


class ContiguityContext:
    """Search state for equivariant contiguity chains from L into K.

    Maps are tuples of codomain vertex indices over the orbit
    representatives of the domain vertex set; monotonicity, simpliciality
    and equivariance are enforced during neighbor generation.
    """

    def __init__(self, dom, cod, budget=None):
        if dom.group is not cod.group:
            raise NotEquivariant("contiguity needs one shared group")
        self.dom = dom
        self.cod = cod
        self.budget = ensure_budget(budget)
        dg = dom.vertex_gposet()
        cg = cod.vertex_gposet()
        self.dg, self.cg = dg, cg
        self.reps = [orb[0] for orb in dg.orbit_indices()]
        self.norb = len(self.reps)
        self.trans = [dg.transporter(i) for i in range(len(dom.complex.vertices))]
        ng = len(dom.group.elements)
        self.allowed = []
        for r in self.reps:
            stab = [g for g in range(ng) if dg.act[g][r] == r]
            self.allowed.append(
                tuple(
                    v
                    for v in range(len(cod.complex.vertices))
                    if all(cg.act[g][v] == v for g in stab)
                )
            )
        # monotonicity constraints between representatives, as in hom search
        self.K = [[() for _ in range(self.norb)] for _ in range(self.norb)]
        for a, ra in enumerate(self.reps):
            for b, rb in enumerate(self.reps):
                if a != b:
                    self.K[a][b] = tuple(
                        k
                        for k in range(ng)
                        if dg.poset.leq_idx(ra, dg.act[k][rb])
                    )
        self.max_simplices = [
            tuple(dom.complex.vertex_index(v) for v in s)
            for s in dom.complex.maximal_simplices()
        ]
        self.cod_up = cg.poset._up
        self.cod_act = cg.act

    def full_values(self, rep_values):
        return tuple(
            self.cod_act[g][rep_values[k]] for (k, g) in self.trans
        )

    def to_map(self, rep_values):
        return SimplicialMap(
            self.dom.complex, self.cod.complex, self.full_values(rep_values),
            validate=False,
        )

    def rep_values_of(self, smap):
        return tuple(smap.values[r] for r in self.reps)

    def is_valid(self, rep_values):
        full = self.full_values(rep_values)
        up = self.cod_up
        act = self.cod_act
        for c in range(self.norb):
            for a in range(self.norb):
                for k in self.K[c][a]:
                    if not (up[rep_values[c]] >> act[k][rep_values[a]]) & 1:
                        return False
        C = self.cod.complex
        for s in self.max_simplices:
            img = [C.vertices[full[v]] for v in s]
            if not C.is_simplex(img):
                return False
        return True

    def neighbors(self, rep_values):
        """All valid maps 1-contiguous to the given one, lazily generated."""
        full = self.full_values(rep_values)
        C = self.cod.complex
        doms = []
        for k, r in enumerate(self.reps):
            cands = []
            for v in self.allowed[k]:
                ok = True
                for s in self.max_simplices:
                    if r in s:
                        img = {full[w] for w in s} | {v}
                        if not C.is_simplex([C.vertices[i] for i in img]):
                            ok = False
                            break
                if ok:
                    cands.append(v)
            doms.append(tuple(cands))
        out = []
        assign = [0] * self.norb
        up = self.cod_up
        act = self.cod_act

        def rec(pos):
            self.budget.charge()
            if pos == self.norb:
                cand = tuple(assign)
                if self.is_valid(cand) and self._one_contig(cand, rep_values):
                    out.append(cand)
                return
            for v in doms[pos]:
                ok = True
                for a in range(pos):
                    for k in self.K[pos][a]:
                        if not (up[v] >> act[k][assign[a]]) & 1:
                            ok = False
                            break
                    if not ok:
                        break
                    for k in self.K[a][pos]:
                        if not (up[assign[a]] >> act[k][v]) & 1:
                            ok = False
                            break
                    if not ok:
                        break
                if ok:
                    assign[pos] = v
                    rec(pos + 1)

        rec(0)
        return out

    def _one_contig(self, a_reps, b_reps):
        fa, fb = self.full_values(a_reps), self.full_values(b_reps)
        C = self.cod.complex
        for s in self.max_simplices:
            img = {fa[v] for v in s} | {fb[v] for v in s}
            if not C.is_simplex([C.vertices[i] for i in img]):
                return False
        return True


def contiguity_distance_equivariant(phi, psi, c_max, ctx=None, budget=None):
    """Minimal equivariant contiguity chain length, or None past c_max.

    Bidirectional BFS on the (symmetric) 1-contiguity relation among
    monotone equivariant simplicial maps.
    """
    if ctx is None:
        raise NotSimplicial("a ContiguityContext is required")
    a = ctx.rep_values_of(phi)
    b = ctx.rep_values_of(psi)
    if a == b:
        return 0
    if not (ctx.is_valid(a) and ctx.is_valid(b)):
        raise NotEquivariant("endpoints must be monotone equivariant maps")
    if c_max <= 0:
        return None
    if ctx._one_contig(a, b):
        return 1
    sides = ({a: 0}, {b: 0})
    frontiers = ([a], [b])
    dist = 1
    while dist < c_max:
        side = 0 if len(sides[0]) <= len(sides[1]) else 1
        seen, other = sides[side], sides[1 - side]
        new = []
        for cur in frontiers[side]:
            for nb in ctx.neighbors(cur):
                if nb in other:
                    total = seen[cur] + 1 + other[nb]
                    if total <= c_max:
                        return total
                if nb not in seen:
                    seen[nb] = seen[cur] + 1
                    new.append(nb)
        frontiers = (
            (new, frontiers[1]) if side == 0 else (frontiers[0], new)
        )
        sides = (seen, other) if side == 0 else (other, seen)
        dist += 1
        if not new:
            break
    # final meet check at exactly c_max
    best = None
    for cur, d0 in sides[0].items():
        for nb, d1 in sides[1].items():
            if d0 + d1 + 1 <= c_max and ctx._one_contig(cur, nb):
                got = d0 + d1 + 1
                if best is None or got < best:
                    best = got
    return best


def last_vertex_approximation(K, sd_K=None, budget=None):
    """The simplicial map sd(K) -> K taking a chain to its top vertex."""
    if sd_K is None:
        sd_K = sd_complex(K, budget)
    P = K.vertex_poset
    values = []
    for s in sd_K.complex.vertices:
        # s is a simplex of K; its top vertex under the order
        idx = [P.index(v) for v in s]
        top = idx[0]
        for i in idx[1:]:
            if P.leq_idx(top, i):
                top = i
        values.append(K.complex.vertex_index(P.elements[top]))
    return SimplicialMap(sd_K.complex, K.complex, tuple(values))


def staircase_product(K, L, budget=None):
    """The ordered triangulation of a product by componentwise chains.

    Simplices are the totally ordered sets of vertex pairs whose two
    projections are simplices; the action is diagonal.
    """
    budget = ensure_budget(budget)
    if K.group is not L.group:
        raise NotEquivariant("product factors must share one group")
    PK, PL = K.vertex_poset, L.vertex_poset
    CK, CL = K.complex, L.complex
    verts = [(x, y) for x in CK.vertices for y in CL.vertices]
    nl = len(CL.vertices)
    pairs_leq = {}

    def leq(a, b):
        got = pairs_leq.get((a, b))
        if got is None:
            got = PK.leq(a[0], b[0]) and PL.leq(a[1], b[1])
            pairs_leq[(a, b)] = got
        return got

    simplices = []

    def extend(chain, projk, projl):
        budget.charge()
        simplices.append(tuple(chain))
        top = chain[-1]
        for v in verts:
            if v == top or not leq(top, v):
                continue
            pk = projk | {v[0]}
            pl = projl | {v[1]}
            if not CK.is_simplex(pk) or not CL.is_simplex(pl):
                continue
            chain.append(v)
            extend(chain, pk, pl)
            chain.pop()

    for v in verts:
        extend([v], {v[0]}, {v[1]})
    budget.check_size(len(simplices), "staircase product")
    complex_ = SimplicialComplex(verts, simplices, _validated=True)
    order = PK.product(PL)
    act = []
    for g in range(len(K.group.elements)):
        rk, rl = K.act[g], L.act[g]
        row = []
        for (x, y) in verts:
            gx = CK.vertices[rk[CK.vertex_index(x)]]
            gy = CL.vertices[rl[CL.vertex_index(y)]]
            row.append(CK.vertex_index(gx) * nl + CL.vertex_index(gy))
        act.append(tuple(row))
    return OrderedGComplex(complex_, order, K.group, act, _validated=True)


def fixed_subcomplex(K, H):
    """The subcomplex of H-fixed vertices and H-fixed simplices."""
    C = K.complex
    fixed_verts = [
        v
        for i, v in enumerate(C.vertices)
        if all(K.act[g][i] == i for g in H.members)
    ]
    keep = set(fixed_verts)
    simplices = [s for s in C.simplices if set(s) <= keep]
    return SimplicialComplex(tuple(fixed_verts), simplices, _validated=True)


def g_connected_complex(K):
    """Every subgroup's fixed subcomplex has a connected 1-skeleton."""
    for H in all_subgroups(K.group):
        sub = fixed_subcomplex(K, H)
        if not _one_skeleton_connected(sub):
            return False
    return True


def _one_skeleton_connected(C):
    verts = C.vertices
    if not verts:
        return True
    adj = {v: set() for v in verts}
    for s in C.simplices:
        if len(s) == 2:
            a, b = s
            adj[a].add(b)
            adj[b].add(a)
    seen = {verts[0]}
    stack = [verts[0]]
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(verts)


def realization_ls_upper_bound(X):
    """Vertex-orbit count: saturated open stars give a categorical cover."""
    return len(X.orbit_indices())


def realization_tc_upper_bound(X):
    """#G * (orbit count)^2 when the space is G-connected, else None."""
    if not X.is_g_connected():
        return None
    k = len(X.orbit_indices())
    return len(X.group.elements) * k * k
