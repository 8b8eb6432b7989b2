"""Equivariant simplicial complexity of ordered G-complexes.

SC at stage (b, c) is the least number of invariant subcomplexes of the
b-fold subdivision of K x K on which the two composite projections are
equivariantly c-contiguous.  Goodness of a subcomplex is hereditary
(chains restrict), invariant subcomplexes are exactly the invariant
downsets of the face poset, and a simplex is coverable if and only if
the saturated face-closure of its orbit is good; so the engine reuses
the orbit-downset cover machinery, and an infinite verdict at fixed
(b, c) always carries a witness simplex.

The limits over c and then b are genuine limits with no computable
stopping rule, so limit values are reported as exact over the explored
grid and labeled as upper bounds for the double limit.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .budget import Budget, ensure_budget
from .errors import BudgetExceeded, MalformedCover, SizeBudgetExceeded
from .cover import maximal_good_downsets, minimum_cover_exact
from .groups import GPoset
from .simplicial import (
    ContiguityContext,
    OrderedGComplex,
    SimplicialComplex,
    SimplicialMap,
    _canon,
    face_gposet,
    last_vertex_approximation,
    sd_complex,
    staircase_product,
)

EXACT_SIMPLEX_CAP = 5_000
EXACT_B_CAP = 2
INFINITY = float("inf")


@dataclass
class SCCertificate:
    b: int
    c: int
    subcomplexes: list
    chains: list

    def size(self):
        return len(self.subcomplexes)


@dataclass
class SCWitness:
    b: int
    c: int
    simplex: tuple
    closure: tuple


@dataclass
class SCResult:
    name: str
    value: object = None
    interval: tuple | None = None
    certificate: object = None
    details: dict = field(default_factory=dict)

    @property
    def status(self):
        if self.interval is not None:
            return "budget"
        if self.value == INFINITY:
            return "infinite"
        return "exact"


def projection_composites(K, b, budget=None):
    """(pi1, pi2, Kb): composites of b approximations with the projections."""
    budget = ensure_budget(budget)
    prod = staircase_product(K, K, budget)
    CK = K.complex
    nl = len(CK.vertices)
    p1 = SimplicialMap(
        prod.complex, CK,
        tuple(CK.vertex_index(x) for (x, _) in prod.complex.vertices),
        validate=False,
    )
    p2 = SimplicialMap(
        prod.complex, CK,
        tuple(CK.vertex_index(y) for (_, y) in prod.complex.vertices),
        validate=False,
    )
    level = prod
    pi1, pi2 = p1, p2
    for _ in range(b):
        finer = sd_complex(level, budget)
        iota = last_vertex_approximation(level, finer)
        pi1 = pi1.compose(iota)
        pi2 = pi2.compose(iota)
        level = finer
    return pi1, pi2, level


class _SCEngine:
    """Goodness tests for invariant subcomplexes at a fixed (b, c)."""

    def __init__(self, K, b, budget):
        self.K = K
        self.b = b
        self.budget = budget
        self.pi1, self.pi2, self.Kb = projection_composites(K, b, budget)
        self.face_g = face_gposet(self.Kb)
        self.orbit_poset = self.face_g.orbit_poset()
        self._good = {}
        self._chain = {}
        self._sub_cache = {}

    def simplices_of_orbit_set(self, orbit_set):
        poset = self.face_g.poset
        mask = self.face_g.orbit_downset_to_mask(orbit_set)
        return tuple(
            poset.elements[i]
            for i in range(len(poset.elements))
            if (mask >> i) & 1
        )

    def subcomplex(self, simplices):
        key = frozenset(simplices)
        got = self._sub_cache.get(key)
        if got is not None:
            return got
        Kb = self.Kb
        verts = sorted(
            {v for s in simplices for v in s}, key=Kb.complex.vertex_index
        )
        C = SimplicialComplex(verts, simplices, _validated=True)
        P = Kb.vertex_poset.subposet(verts)
        pos = {v: i for i, v in enumerate(verts)}
        act = []
        for row in Kb.act:
            act.append(
                tuple(
                    pos[Kb.complex.vertices[row[Kb.complex.vertex_index(v)]]]
                    for v in verts
                )
            )
        sub = OrderedGComplex(C, P, Kb.group, act, _validated=True)
        restricted = []
        for pi in (self.pi1, self.pi2):
            restricted.append(
                SimplicialMap(
                    C, self.K.complex,
                    tuple(
                        pi.values[Kb.complex.vertex_index(v)] for v in verts
                    ),
                    validate=False,
                )
            )
        got = (sub, restricted[0], restricted[1])
        self._sub_cache[key] = got
        return got

    def good_at(self, simplices, c):
        key = (frozenset(simplices), c)
        got = self._good.get(key)
        if got is not None:
            return got
        # hereditary implications from recorded verdicts at the same c
        this = key[0]
        for (other, c2), verdict in self._good.items():
            if c2 != c:
                continue
            if verdict and this <= other:
                self._good[key] = True
                return True
            if not verdict and other <= this:
                self._good[key] = False
                return False
        sub, r1, r2 = self.subcomplex(simplices)
        ctx = ContiguityContext(sub, self.K, self.budget)
        from .simplicial import contiguity_distance_equivariant

        d = contiguity_distance_equivariant(r1, r2, c, ctx=ctx)
        got = d is not None and d <= c
        self._good[key] = got
        return got

    def chain_maps(self, simplices, c):
        """An explicit chain of equivariant maps joining the projections."""
        key = (frozenset(simplices), c)
        got = self._chain.get(key)
        if got is not None:
            return got
        sub, r1, r2 = self.subcomplex(simplices)
        ctx = ContiguityContext(sub, self.K, self.budget)
        a, b_ = ctx.rep_values_of(r1), ctx.rep_values_of(r2)
        # plain BFS with parents, bounded by c
        parents = {a: None}
        frontier = [a]
        found = a == b_
        depth = 0
        while frontier and not found and depth < c:
            depth += 1
            nxt = []
            for cur in frontier:
                for nb in ctx.neighbors(cur):
                    if nb not in parents:
                        parents[nb] = cur
                        nxt.append(nb)
                        if nb == b_:
                            found = True
            frontier = nxt
        if not found:
            raise MalformedCover("subcomplex passed goodness but chain search failed")
        chain = []
        cur = b_
        while cur is not None:
            chain.append(cur)
            cur = parents[cur]
        chain.reverse()
        maps = [ctx.to_map(v) for v in chain]
        self._chain[key] = maps
        return maps


def sc_g_bc(K, b, c, budget=None, _engine=None):
    """SC at fixed (b, c): exact value, or infinity with a witness simplex."""
    budget = ensure_budget(budget)
    if b > EXACT_B_CAP:
        raise SizeBudgetExceeded(
            f"exact SC search is limited to b <= {EXACT_B_CAP}"
        )
    engine = _engine if _engine is not None else _SCEngine(K, b, budget)
    if len(engine.Kb.complex.simplices) > EXACT_SIMPLEX_CAP:
        raise SizeBudgetExceeded(
            f"sd^{b}(K x K) has {len(engine.Kb.complex.simplices)} simplices, "
            f"over the exact-search cap of {EXACT_SIMPLEX_CAP}"
        )
    op = engine.orbit_poset

    # phase 1: a simplex orbit whose minimal invariant subcomplex is bad
    for oi in range(len(op.elements)):
        closure = frozenset(
            j for j in range(len(op.elements)) if (op.down_mask(oi) >> j) & 1
        )
        simplices = engine.simplices_of_orbit_set(closure)
        if not engine.good_at(simplices, c):
            witness = op.elements[oi]
            return SCResult(
                f"sc_g[{b},{c}]",
                INFINITY,
                certificate=SCWitness(b, c, witness, simplices),
                details={"b": b, "c": c},
            )

    def is_good(orbit_set):
        if not orbit_set:
            return True
        return engine.good_at(engine.simplices_of_orbit_set(orbit_set), c)

    candidates = maximal_good_downsets(op, is_good, budget)
    chosen = minimum_cover_exact(len(op.elements), candidates, budget)
    subcomplexes = []
    chains = []
    for ci in chosen:
        simplices = engine.simplices_of_orbit_set(candidates[ci])
        subcomplexes.append(simplices)
        chains.append(engine.chain_maps(simplices, c))
    cert = SCCertificate(
        b, c,
        [list(map(list, s)) for s in subcomplexes],
        [[m.as_dict() for m in ch] for ch in chains],
    )
    return SCResult(
        f"sc_g[{b},{c}]",
        len(chosen),
        certificate=cert,
        details={"b": b, "c": c},
    )


def sc_g_b(K, b, c_max, budget=None):
    """min over c <= c_max at fixed b, with the per-c profile recorded."""
    budget = ensure_budget(budget)
    engine = _SCEngine(K, b, budget)
    values = {}
    best = None
    for c in range(c_max + 1):
        r = sc_g_bc(K, b, c, budget, _engine=engine)
        values[c] = r.value
        if best is None or (r.value is not None and r.value < best.value):
            best = r
    return SCResult(
        f"sc_g_b[{b}]",
        best.value,
        certificate=best.certificate,
        details={"b": b, "c_max": c_max, "values_by_c": values},
    )


def sc_g(K, b_max, c_max, budget=None):
    """min over the (b, c) grid; an upper bound for the double limit.

    The limit equals the realization's equivariant topological
    complexity, but no computable rule certifies stabilization in b, so
    the label stays 'upper bound' unless a matching lower bound is known.
    """
    budget = ensure_budget(budget)
    per_b = {}
    best = None
    for b in range(b_max + 1):
        r = sc_g_b(K, b, c_max, budget)
        per_b[b] = r.value
        if best is None or (r.value is not None and r.value < best.value):
            best = r
    return SCResult(
        "sc_g",
        best.value,
        certificate=best.certificate,
        details={
            "b_max": b_max,
            "c_max": c_max,
            "values_by_b": per_b,
            "label": "upper bound for the (b, c) double limit",
        },
    )


def verify_sc_cover(K, b, c, cover, budget=None):
    """Re-verify a proposed cover; certificate out, or MalformedCover.

    Checks: face-closedness, invariance, joint coverage of every simplex
    of the subdivided product, and an equivariant contiguity chain of
    length at most c on each piece.
    """
    budget = ensure_budget(budget)
    engine = _SCEngine(K, b, budget)
    Kb = engine.Kb
    vindex = Kb.complex._vindex
    all_simplices = set(Kb.complex.simplices)
    covered = set()
    canon_cover = []
    for li, piece in enumerate(cover):
        canon = set()
        for s in piece:
            cs = _canon(tuple(s), vindex)
            if cs not in all_simplices:
                raise MalformedCover(
                    f"cover piece {li} lists {s!r}, not a simplex of the "
                    f"subdivided product"
                )
            canon.add(cs)
        for s in list(canon):
            for i in range(len(s)):
                face = s[:i] + s[i + 1 :]
                if len(face) >= 1 and face not in canon:
                    raise MalformedCover(
                        f"cover piece {li} is not closed under faces"
                    )
        for s in list(canon):
            for t in engine.Kb.simplex_orbit(s):
                if t not in canon:
                    raise MalformedCover(f"cover piece {li} is not invariant")
        canon_cover.append(sorted(canon, key=lambda s: (len(s), s)))
        covered |= canon
    if covered != all_simplices:
        missing = sorted(all_simplices - covered)[:3]
        raise MalformedCover(f"cover misses simplices, e.g. {missing!r}")
    chains = []
    for piece in canon_cover:
        if not engine.good_at(tuple(piece), c):
            raise MalformedCover(
                "a cover piece admits no equivariant contiguity chain "
                f"of length <= {c}"
            )
        chains.append(engine.chain_maps(tuple(piece), c))
    return SCCertificate(
        b, c,
        [list(map(list, s)) for s in canon_cover],
        [[m.as_dict() for m in ch] for ch in chains],
    )
