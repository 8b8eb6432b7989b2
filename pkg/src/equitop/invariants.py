"""Equivariant LS-category, motion-planning complexity, sectional category.

All three engines share one pipeline.  Phase 1 decides finiteness: a point
p lies in some good open invariant set if and only if the saturated
minimal neighborhood G.U_p is good, because G.U_p sits inside every open
invariant set containing p and goodness is hereditary under passing to
open invariant subsets.  An infinite answer therefore always comes with a
witness point, never from a timeout.  Phase 2 computes the exact value:
open invariant sets are the downsets of the orbit poset, goodness is
hereditary on that lattice, so minimum covers are found over the maximal
good downsets by exact branch and bound.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .budget import Budget, ensure_budget, pmap
from .cover import maximal_good_downsets, minimum_cover_exact
from .errors import BudgetExceeded, NotEquivariant, NotInvariant, NotOpen
from .groups import GPoset, Subgroup, all_subgroups
from .homotopy import (
    CUTOFF,
    FOUND,
    UNREACHABLE,
    FenceCertificate,
    HomContext,
    fence_search,
    is_equivariant_map,
)
from .poset import Downset, MonotoneMap
from .subdivision import subdivide

INFINITY = float("inf")


@dataclass
class CoveredSet:
    elements: tuple
    evidence: object


@dataclass
class CoverCertificate:
    kind: str
    sets: list
    m: int | None = None

    def size(self):
        return len(self.sets)


@dataclass
class InfinityCertificate:
    witness: object
    neighborhood: tuple
    reason: str
    at_m: int | None = None
    transcript: dict = field(default_factory=dict)


@dataclass
class SectionEvidence:
    mapping: dict


@dataclass
class InvariantResult:
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

    def is_finite(self):
        return self.interval is None and self.value != INFINITY


def _as_mask(X, U):
    if isinstance(U, Downset):
        if U.poset is not X.poset:
            raise NotOpen("downset belongs to a different poset")
        return U.mask
    if isinstance(U, int):
        mask = U
    else:
        mask = X.poset.mask_of_elements(U)
    if not X.poset.is_downset_mask(mask):
        raise NotOpen("subset is not downward closed")
    return mask


def _check_invariant_open(X, mask):
    if not X.poset.is_downset_mask(mask):
        raise NotOpen("subset is not downward closed")
    if not X.is_invariant_mask(mask):
        raise NotInvariant("subset is not closed under the group action")


class _CategoricalEngine:
    """Fence searches for 'inclusion is homotopic to an orbit-valued map'.

    Goodness is hereditary downward (restrict the fence) and badness
    upward, so recorded verdicts on subsets and supersets decide many
    queries without a search.
    """

    def __init__(self, X, budget):
        self.X = X
        self.budget = budget
        self._cache = {}
        self._good_masks = []
        self._bad_masks = []

    def verdict(self, mask):
        """'good' or 'fail', using implication before searching."""
        for g in self._good_masks:
            if mask & g == mask:
                return "good"
        for b in self._bad_masks:
            if mask & b == b:
                return "fail"
        v, _, _ = self.search(mask, collect=False)
        if v == "good":
            self._good_masks.append(mask)
        else:
            self._bad_masks.append(mask)
        return v

    def search(self, mask, collect=False):
        key = (mask, collect)
        got = self._cache.get(key)
        if got is None:
            got = self._search(mask, collect)
            self._cache[key] = got
        return got

    def _search(self, mask, collect):
        X = self.X
        U = X.subgposet_mask(mask)
        ctx = HomContext(U, X, budget=self.budget)
        start = tuple(
            X.poset.index(U.poset.elements[r]) for r in ctx.reps
        )
        targets = []
        for orb in X.orbit_indices():
            domains = [
                tuple(v for v in ctx.allowed[k] if v in orb)
                for k in range(ctx.norb)
            ]
            if any(not d for d in domains):
                continue
            targets.extend(ctx.enumerate_all(domains=domains))
        if not targets:
            return ("fail", None, 0)
        res = fence_search(
            ctx, start, targets=targets, pattern="free", collect_fence=collect
        )
        if res.status == FOUND:
            cert = res.certificate(ctx) if collect else None
            return ("good", cert, res.explored)
        return ("fail", None, res.explored)


class _SectionFenceEngine:
    """Fence searches between the two projections, over subsets of X x X.

    Restricting a fence shows dist(U') <= dist(U) for U' inside U, so
    recorded exact distances on subsets give lower bounds and on
    supersets upper bounds; many threshold queries resolve without a
    search.
    """

    def __init__(self, X, budget):
        self.X = X
        self.D = X.diagonal()
        self.budget = budget
        self._dist = {}
        self._fence = {}

    def distance(self, mask):
        got = self._dist.get(mask)
        if got is None:
            got = self._run(mask, collect=False)[0]
            self._dist[mask] = got
        return got

    def good_at(self, mask, m):
        """dist(mask) <= m, decided by bounds when possible."""
        got = self._dist.get(mask)
        if got is not None:
            return got <= m
        for m2, d2 in self._dist.items():
            if m2 & mask == m2 and d2 > m:
                return False
            if m2 & mask == mask and d2 <= m:
                return True
        return self.distance(mask) <= m

    def reachable(self, mask):
        """dist(mask) finite, decided by bounds when possible."""
        got = self._dist.get(mask)
        if got is not None:
            return got < INFINITY
        for m2, d2 in self._dist.items():
            if m2 & mask == m2 and d2 == INFINITY:
                return False
            if m2 & mask == mask and d2 < INFINITY:
                return True
        return self.distance(mask) < INFINITY

    def fence(self, mask):
        got = self._fence.get(mask)
        if got is None:
            got = self._run(mask, collect=True)
            self._fence[mask] = got
            self._dist[mask] = got[0]
        return got

    def _run(self, mask, collect):
        X, D = self.X, self.D
        U = D.subgposet_mask(mask)
        ctx = HomContext(U, X, budget=self.budget)
        n = len(X.poset.elements)
        start = tuple(
            X.poset.index(U.poset.elements[r][0]) for r in ctx.reps
        )
        target = tuple(
            X.poset.index(U.poset.elements[r][1]) for r in ctx.reps
        )
        res = fence_search(
            ctx, start, target=target, pattern="up-first", collect_fence=collect
        )
        if res.status == FOUND:
            cert = res.certificate(ctx) if collect else None
            return (res.distance, cert, res.explored)
        return (INFINITY, None, res.explored)


def is_g_categorical(X, U, budget=None, collect=True):
    """Decide whether an open invariant set is G-categorical.

    Returns ('certificate', FenceCertificate), ('fail', transcript) when
    the reachable component of the inclusion holds no orbit-valued map,
    or ('unknown', transcript) when the budget ran out first.
    """
    budget = ensure_budget(budget)
    mask = _as_mask(X, U)
    _check_invariant_open(X, mask)
    engine = _CategoricalEngine(X, budget)
    try:
        verdict, cert, explored = engine.search(mask, collect=collect)
    except BudgetExceeded:
        return ("unknown", {"explored": None, "exhausted": False})
    if verdict == "good":
        return ("certificate", cert)
    return ("fail", {"explored": explored, "exhausted": True})


def ls_cat_g(X, budget=None, threads=1):
    """Equivariant LS-category with a cover or infinity certificate."""
    budget = ensure_budget(budget)
    engine = _CategoricalEngine(X, budget)
    poset = X.poset
    reps = X.orbit_reps()

    def minimal_mask(rep):
        return X.saturate_mask(poset.down_mask(poset.index(rep)))

    try:
        verdicts = pmap(
            lambda rep: engine.verdict(minimal_mask(rep)), reps, threads=threads
        )
    except BudgetExceeded:
        return _budget_interval("ls_cat_g", X, budget)
    for rep, verdict in zip(reps, verdicts):
        if verdict == "fail":
            mask = minimal_mask(rep)
            _, _, explored = engine.search(mask, collect=False)
            cert = InfinityCertificate(
                witness=rep,
                neighborhood=poset.elements_of_mask(mask),
                reason="minimal-invariant-neighborhood-not-categorical",
                transcript={"explored": explored, "exhausted": True},
            )
            return InvariantResult("ls_cat_g", INFINITY, certificate=cert)

    orbit_poset = X.orbit_poset()

    def is_good(orbit_set):
        if not orbit_set:
            return True
        mask = X.orbit_downset_to_mask(orbit_set)
        return engine.verdict(mask) == "good"

    try:
        candidates = maximal_good_downsets(orbit_poset, is_good, budget)
        chosen = minimum_cover_exact(
            len(orbit_poset.elements), candidates, budget
        )
    except BudgetExceeded:
        return _budget_interval("ls_cat_g", X, budget)
    sets = []
    for ci in chosen:
        mask = X.orbit_downset_to_mask(candidates[ci])
        _, cert, _ = engine.search(mask, collect=True)
        sets.append(CoveredSet(poset.elements_of_mask(mask), cert))
    cover = CoverCertificate("categorical", sets)
    return InvariantResult(
        "ls_cat_g",
        len(chosen),
        certificate=cover,
        details={"orbit_count": len(reps)},
    )


def _budget_interval(name, X, budget, upper=INFINITY, lower=1):
    return InvariantResult(
        name,
        value=None,
        interval=(lower, upper),
        details={"budget": budget.snapshot()},
    )


def cc_g_m(X, m, budget=None, threads=1, _engine=None):
    """The m-bounded motion-planning invariant secat_G(q_m), exactly.

    A set is good when an up-first fence of length at most m joins the
    two projections over it; that is the same thing as an equivariant
    section of the length-m path fibration, by the exponential law.
    """
    if m < 0:
        raise ValueError("m must be nonnegative")
    budget = ensure_budget(budget)
    engine = _engine if _engine is not None else _SectionFenceEngine(X, budget)
    D = engine.D
    poset = D.poset
    reps = D.orbit_reps()

    def minimal_mask(rep):
        return D.saturate_mask(poset.down_mask(poset.index(rep)))

    try:
        dists = pmap(
            lambda rep: engine.distance(minimal_mask(rep)), reps, threads=threads
        )
    except BudgetExceeded:
        return _budget_interval(f"cc_g_m[{m}]", X, budget)
    for rep, dist in zip(reps, dists):
        if dist == INFINITY or dist > m:
            reason = (
                "no-section-at-any-length" if dist == INFINITY
                else "no-section-at-this-length"
            )
            cert = InfinityCertificate(
                witness=rep,
                neighborhood=poset.elements_of_mask(minimal_mask(rep)),
                reason=reason,
                at_m=m,
                transcript={
                    "minimal_neighborhood_distance": (
                        None if dist == INFINITY else dist
                    )
                },
            )
            return InvariantResult(f"cc_g_m[{m}]", INFINITY, certificate=cert)

    orbit_poset = D.orbit_poset()

    def is_good(orbit_set):
        if not orbit_set:
            return True
        mask = D.orbit_downset_to_mask(orbit_set)
        return engine.good_at(mask, m)

    try:
        candidates = maximal_good_downsets(orbit_poset, is_good, budget)
        chosen = minimum_cover_exact(
            len(orbit_poset.elements), candidates, budget
        )
    except BudgetExceeded:
        return _budget_interval(f"cc_g_m[{m}]", X, budget)
    sets = []
    for ci in chosen:
        mask = D.orbit_downset_to_mask(candidates[ci])
        dist, cert, _ = engine.fence(mask)
        sets.append(CoveredSet(poset.elements_of_mask(mask), cert))
    cover = CoverCertificate("section", sets, m=m)
    return InvariantResult(
        f"cc_g_m[{m}]",
        len(chosen),
        certificate=cover,
        details={"m": m},
    )


def cc_g(X, m_max=None, budget=None, threads=1):
    """The limit of cc_g_m over m >= 1, reported as TC_G.

    Every fence search runs its component to exhaustion, so each
    candidate has a final verdict and the limit value is certain.  The
    result records the stabilizing m and the theoretical (astronomical)
    path-length bound N = #(X) ** #(XxX/G) for reference.
    """
    budget = ensure_budget(budget)
    engine = _SectionFenceEngine(X, budget)
    D = engine.D
    poset = D.poset
    reps = D.orbit_reps()

    def minimal_mask(rep):
        return D.saturate_mask(poset.down_mask(poset.index(rep)))

    n_bound = len(X.poset.elements) ** len(reps)

    try:
        dists = pmap(
            lambda rep: engine.distance(minimal_mask(rep)), reps, threads=threads
        )
    except BudgetExceeded:
        return _budget_interval("cc_g", X, budget)
    for rep, dist in zip(reps, dists):
        if dist == INFINITY:
            cert = InfinityCertificate(
                witness=rep,
                neighborhood=poset.elements_of_mask(minimal_mask(rep)),
                reason="no-section-at-any-length",
                transcript={},
            )
            return InvariantResult(
                "cc_g", INFINITY, certificate=cert,
                details={"path_length_bound_N": n_bound},
            )

    orbit_poset = D.orbit_poset()

    def good_limit(orbit_set):
        if not orbit_set:
            return True
        mask = D.orbit_downset_to_mask(orbit_set)
        return engine.reachable(mask)

    try:
        candidates = maximal_good_downsets(orbit_poset, good_limit, budget)
        chosen = minimum_cover_exact(len(orbit_poset.elements), candidates, budget)
    except BudgetExceeded:
        return _budget_interval("cc_g", X, budget)
    limit_value = len(chosen)

    # the value at level m uses only candidates whose fence fits in m;
    # walk m upward until the limit value is achieved
    cand_dist = [
        engine.distance(D.orbit_downset_to_mask(c)) for c in candidates
    ]
    values_by_m = {}
    m = 1
    stabilized_at = None
    hard_stop = m_max if m_max is not None else max(
        [int(d) for d in cand_dist] + [int(d) for d in dists] + [1]
    )
    while m <= hard_stop:
        if any(d > m for d in dists):
            values_by_m[m] = INFINITY
        else:
            usable = [c for c, d in zip(candidates, cand_dist) if d <= m]
            if usable and _covers_all(usable, len(orbit_poset.elements)):
                try:
                    v = len(
                        minimum_cover_exact(
                            len(orbit_poset.elements), usable, budget
                        )
                    )
                except BudgetExceeded:
                    return _budget_interval("cc_g", X, budget)
                values_by_m[m] = v
            else:
                values_by_m[m] = INFINITY
        if values_by_m[m] == limit_value:
            stabilized_at = m
            break
        m += 1
    if stabilized_at is None:
        # m_max cut the climb short of the limit
        reached = values_by_m.get(m_max, INFINITY) if m_max else INFINITY
        return InvariantResult(
            "cc_g",
            value=None,
            interval=(limit_value, reached),
            details={
                "path_length_bound_N": n_bound,
                "values_by_m": values_by_m,
                "note": "m_max reached before stabilization",
            },
        )

    sets = []
    for ci in chosen:
        mask = D.orbit_downset_to_mask(candidates[ci])
        dist, cert, _ = engine.fence(mask)
        sets.append(CoveredSet(poset.elements_of_mask(mask), cert))
    cover = CoverCertificate("section", sets, m=stabilized_at)
    return InvariantResult(
        "cc_g",
        limit_value,
        certificate=cover,
        details={
            "stabilized_at_m": stabilized_at,
            "path_length_bound_N": n_bound,
            "values_by_m": values_by_m,
        },
    )


def _covers_all(candidate_sets, universe_size):
    got = set()
    for c in candidate_sets:
        got |= c
    return len(got) == universe_size


def secat_g(p, E, B, budget=None, threads=1):
    """Equivariant sectional category of a monotone equivariant map.

    A set U in the base is good when p admits a strict equivariant
    monotone section over U; sections are searched by backtracking over
    orbit representatives with fiber and stabilizer constraints.
    """
    budget = ensure_budget(budget)
    if not is_equivariant_map(E, B, p):
        raise NotEquivariant("the projection map must be equivariant")
    poset = B.poset
    reps = B.orbit_reps()
    section_cache = {}

    def find_section(mask, collect=False):
        key = (mask, collect)
        got = section_cache.get(key)
        if got is not None:
            return got
        U = B.subgposet_mask(mask)
        ctx = HomContext(U, E, budget=budget)
        domains = []
        feasible = True
        for k in range(ctx.norb):
            rep_el = U.poset.elements[ctx.reps[k]]
            b_idx = poset.index(rep_el)
            dom = tuple(
                v for v in ctx.allowed[k] if p.values[v] == b_idx
            )
            if not dom:
                feasible = False
            domains.append(dom)
        if not feasible:
            section_cache[key] = None
            return None
        found = ctx.enumerate_all(domains=domains, first_only=True)
        result = None
        if found:
            smap = ctx.to_map(found[0])
            result = smap
        section_cache[key] = result
        return result

    def minimal_mask(rep):
        return B.saturate_mask(poset.down_mask(poset.index(rep)))

    try:
        sections = pmap(
            lambda rep: find_section(minimal_mask(rep)), reps, threads=threads
        )
    except BudgetExceeded:
        return _budget_interval("secat_g", B, budget)
    for rep, s in zip(reps, sections):
        if s is None:
            cert = InfinityCertificate(
                witness=rep,
                neighborhood=poset.elements_of_mask(minimal_mask(rep)),
                reason="no-strict-section-over-minimal-neighborhood",
                transcript={},
            )
            return InvariantResult("secat_g", INFINITY, certificate=cert)

    orbit_poset = B.orbit_poset()

    def is_good(orbit_set):
        if not orbit_set:
            return True
        mask = B.orbit_downset_to_mask(orbit_set)
        return find_section(mask) is not None

    try:
        candidates = maximal_good_downsets(orbit_poset, is_good, budget)
        chosen = minimum_cover_exact(len(orbit_poset.elements), candidates, budget)
    except BudgetExceeded:
        return _budget_interval("secat_g", B, budget)
    sets = []
    for ci in chosen:
        mask = B.orbit_downset_to_mask(candidates[ci])
        smap = find_section(mask)
        sets.append(
            CoveredSet(
                poset.elements_of_mask(mask),
                SectionEvidence(
                    {str(k): str(v) for k, v in smap.as_dict().items()}
                ),
            )
        )
    cover = CoverCertificate("strict-section", sets)
    return InvariantResult("secat_g", len(chosen), certificate=cover)


def bound_report(X, budget=None, threads=1):
    """Evaluate the inequality chain between the computed invariants.

    Skips an inequality (with the reason) whenever its hypothesis fails,
    and marks entries Unknown when a budget ran out.
    """
    budget = ensure_budget(budget)

    def attempt(fn):
        try:
            return fn()
        except BudgetExceeded:
            return None

    g_connected = X.is_g_connected()
    fixed_nonempty = (
        len(X.fixed_points(Subgroup.whole(X.group))) > 0
    )
    ls_x = attempt(lambda: ls_cat_g(X, Budget(budget.remaining()), threads))
    tc_x = attempt(lambda: cc_g(X, None, Budget(budget.remaining()), threads))
    sd_x = attempt(lambda: subdivide(X, Budget(budget.remaining())))
    ls_sd = (
        attempt(lambda: ls_cat_g(sd_x, Budget(budget.remaining()), threads))
        if sd_x is not None
        else None
    )
    dd = X.diagonal()
    ls_xx = attempt(lambda: ls_cat_g(dd, Budget(budget.remaining()), threads))

    def val(res):
        if res is None or res.interval is not None:
            return None
        return res.value

    values = {
        "ls_g": val(ls_x),
        "tc_g": val(tc_x),
        "ls_g_sd": val(ls_sd),
        "ls_g_square": val(ls_xx),
        "group_order": len(X.group.elements),
        "g_connected": g_connected,
        "fixed_points_nonempty": fixed_nonempty,
    }

    checks = []

    def add(name, lhs, rhs, hypothesis_ok, hypothesis):
        if not hypothesis_ok:
            checks.append(
                {"name": name, "status": "skipped", "reason": hypothesis}
            )
            return
        if lhs is None or rhs is None:
            checks.append({"name": name, "status": "unknown"})
            return
        checks.append(
            {
                "name": name,
                "status": "holds" if lhs <= rhs else "VIOLATED",
                "lhs": _ser(lhs),
                "rhs": _ser(rhs),
            }
        )

    g = len(X.group.elements)
    ls = values["ls_g"]
    add("tc_g <= ls_g(X x X)", values["tc_g"], values["ls_g_square"],
        g_connected, "requires X G-connected")
    add("ls_g <= tc_g", ls, values["tc_g"],
        g_connected and fixed_nonempty,
        "requires X G-connected and a nonempty fixed set")
    add("ls_g(sd X) <= ls_g(X)", values["ls_g_sd"], ls, True, "")
    add(
        "ls_g(X x X) <= #G * ls_g(X)^2",
        values["ls_g_square"],
        None if ls is None else g * ls * ls,
        True,
        "",
    )
    return {"values": {k: _ser(v) for k, v in values.items()}, "checks": checks}


def _ser(v):
    if v == INFINITY:
        return "infinity"
    return v
