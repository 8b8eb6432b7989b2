"""Finite groups acting monotonically on finite posets.

Groups are always materialized as full multiplication tables built from
generator permutations; at the scale this package targets (group order
at most a few dozen) table lookups beat anything cleverer.  A GPoset is
validated eagerly: invalid actions never enter the system.
"""

from __future__ import annotations

from .errors import (
    BudgetExceeded,
    ClosureBudgetExceeded,
    NotBijective,
    NotEquivariant,
    NotInvariant,
    NotMonotone,
    UnknownElement,
)
from .poset import FinitePoset

SUBGROUP_ENUM_CAP = 24
CLOSURE_CAP = 256


class FiniteGroup:
    """A finite group given by named elements and a multiplication table."""

    __slots__ = ("elements", "mul", "identity", "inv", "_index")

    def __init__(self, elements, mul, _validated=False):
        self.elements = tuple(elements)
        self._index = {g: i for i, g in enumerate(self.elements)}
        if len(self._index) != len(self.elements):
            raise NotBijective("group element names must be distinct")
        self.mul = tuple(tuple(row) for row in mul)
        n = len(self.elements)
        ident = None
        for e in range(n):
            if all(self.mul[e][g] == g == self.mul[g][e] for g in range(n)):
                ident = e
                break
        if ident is None:
            raise NotBijective("multiplication table has no identity")
        self.identity = ident
        inv = [None] * n
        for g in range(n):
            for h in range(n):
                if self.mul[g][h] == ident and self.mul[h][g] == ident:
                    inv[g] = h
                    break
            if inv[g] is None:
                raise NotBijective(f"element {self.elements[g]!r} has no inverse")
        self.inv = tuple(inv)
        if not _validated:
            for a in range(n):
                for b in range(n):
                    for c in range(n):
                        if self.mul[self.mul[a][b]][c] != self.mul[a][self.mul[b][c]]:
                            raise NotBijective("multiplication table not associative")

    @classmethod
    def trivial(cls):
        return cls(("e",), ((0,),), _validated=True)

    def order(self):
        return len(self.elements)

    def __len__(self):
        return len(self.elements)

    def index(self, name):
        try:
            return self._index[name]
        except KeyError:
            raise UnknownElement(f"unknown group element {name!r}") from None

    def __repr__(self):
        return f"FiniteGroup(order {len(self.elements)})"


class Subgroup:
    """A validated subgroup, stored as a frozenset of element indices."""

    __slots__ = ("group", "members")

    def __init__(self, group, members):
        self.group = group
        self.members = frozenset(members)
        if group.identity not in self.members:
            raise NotBijective("subgroup must contain the identity")
        for a in self.members:
            if group.inv[a] not in self.members:
                raise NotBijective("subgroup not closed under inverses")
            for b in self.members:
                if group.mul[a][b] not in self.members:
                    raise NotBijective("subgroup not closed under multiplication")

    @classmethod
    def trivial(cls, group):
        return cls(group, (group.identity,))

    @classmethod
    def whole(cls, group):
        return cls(group, range(len(group.elements)))

    @classmethod
    def generated_by(cls, group, gen_indices):
        members = {group.identity}
        frontier = list(gen_indices)
        while frontier:
            g = frontier.pop()
            if g in members:
                continue
            members.add(g)
            for h in list(members):
                for prod in (group.mul[g][h], group.mul[h][g]):
                    if prod not in members:
                        frontier.append(prod)
                inv = group.inv[g]
                if inv not in members:
                    frontier.append(inv)
        return cls(group, members)

    def order(self):
        return len(self.members)

    def sorted_members(self):
        return tuple(sorted(self.members))

    def element_names(self):
        return tuple(self.group.elements[i] for i in self.sorted_members())

    def __eq__(self, other):
        return (
            isinstance(other, Subgroup)
            and self.group is other.group
            and self.members == other.members
        )

    def __hash__(self):
        return hash(self.members)

    def __le__(self, other):
        return self.members <= other.members

    def __repr__(self):
        return f"Subgroup({sorted(self.element_names())})"


def all_subgroups(group):
    """Every subgroup, deduplicated, in a deterministic order.

    Works by repeated single-element extension starting from the trivial
    subgroup; every subgroup is reachable that way because any generating
    set can be added one generator at a time.
    """
    if len(group.elements) > SUBGROUP_ENUM_CAP:
        raise BudgetExceeded(
            f"subgroup enumeration capped at group order {SUBGROUP_ENUM_CAP}"
        )
    seen = {frozenset({group.identity})}
    frontier = [frozenset({group.identity})]
    while frontier:
        base = frontier.pop()
        for g in range(len(group.elements)):
            if g in base:
                continue
            ext = Subgroup.generated_by(group, tuple(base) + (g,)).members
            if ext not in seen:
                seen.add(ext)
                frontier.append(ext)
    subs = sorted(seen, key=lambda s: (len(s), tuple(sorted(s))))
    return [Subgroup(group, s) for s in subs]


class GPoset:
    """A finite poset with a monotone action of a finite group.

    `act[g][i]` is the index of g.x for the element with index i.  Each g
    must act as an order automorphism; that is exactly continuity of the
    action on the associated T0 space.
    """

    __slots__ = ("poset", "group", "act", "_orbit_of", "_orbits")

    def __init__(self, poset, group, act, _validated=False):
        self.poset = poset
        self.group = group
        self.act = tuple(tuple(row) for row in act)
        if not _validated:
            self._validate()
        self._orbit_of, self._orbits = self._compute_orbits()

    def _validate(self):
        n = len(self.poset.elements)
        ng = len(self.group.elements)
        if len(self.act) != ng or any(len(row) != n for row in self.act):
            raise NotBijective("action table has wrong shape")
        ident = self.act[self.group.identity]
        if tuple(ident) != tuple(range(n)):
            raise NotEquivariant("identity element must act trivially")
        for g in range(ng):
            row = self.act[g]
            if len(set(row)) != n:
                raise NotBijective(
                    f"group element {self.group.elements[g]!r} does not act "
                    f"by a bijection"
                )
            for i in range(n):
                m = self.poset.up_mask(i)
                while m:
                    j = (m & -m).bit_length() - 1
                    if not self.poset.leq_idx(row[i], row[j]):
                        raise NotMonotone(
                            f"group element {self.group.elements[g]!r} does not "
                            f"act monotonically"
                        )
                    m &= m - 1
        for g in range(ng):
            for h in range(ng):
                gh = self.group.mul[h][g]
                for i in range(n):
                    if self.act[h][self.act[g][i]] != self.act[gh][i]:
                        raise NotEquivariant("action is not compatible with mul")

    def _compute_orbits(self):
        n = len(self.poset.elements)
        orbit_of = [None] * n
        orbits = []
        for i in range(n):
            if orbit_of[i] is not None:
                continue
            members = sorted({row[i] for row in self.act})
            k = len(orbits)
            for j in members:
                orbit_of[j] = k
            orbits.append(tuple(members))
        return tuple(orbit_of), tuple(orbits)

    # -- constructors -----------------------------------------------------

    @classmethod
    def trivial(cls, poset):
        return cls(
            poset,
            FiniteGroup.trivial(),
            (tuple(range(len(poset.elements))),),
            _validated=True,
        )

    @classmethod
    def from_generator_perms(cls, poset, gens, closure_cap=CLOSURE_CAP):
        """Close named generator permutations under composition.

        Each generator must be a monotone bijection of the poset; group
        elements get word names built from generator names ('e' is the
        identity).
        """
        n = len(poset.elements)
        ident = tuple(range(n))
        gen_perms = {}
        for name in sorted(gens):
            mapping = gens[name]
            perm = [None] * n
            for src, dst in mapping.items():
                perm[poset.index(src)] = poset.index(dst)
            if any(v is None for v in perm) or len(set(perm)) != n:
                raise NotBijective(f"generator {name!r} is not a permutation")
            perm = tuple(perm)
            for i in range(n):
                m = poset.up_mask(i)
                while m:
                    j = (m & -m).bit_length() - 1
                    if not poset.leq_idx(perm[i], perm[j]):
                        raise NotMonotone(
                            f"generator {name!r} is not monotone: breaks "
                            f"{poset.elements[i]!r} <= {poset.elements[j]!r}"
                        )
                    m &= m - 1
            gen_perms[name] = perm
        names = {ident: "e"}
        order = [ident]
        frontier = [ident]
        while frontier:
            nxt = []
            for perm in frontier:
                for gname in sorted(gen_perms):
                    g = gen_perms[gname]
                    comp = tuple(g[perm[i]] for i in range(n))
                    if comp not in names:
                        word = gname if names[perm] == "e" else names[perm] + "*" + gname
                        names[comp] = word
                        order.append(comp)
                        nxt.append(comp)
                        if len(order) > closure_cap:
                            raise ClosureBudgetExceeded(
                                f"generator closure passed {closure_cap} elements"
                            )
            frontier = nxt
        perm_index = {perm: k for k, perm in enumerate(order)}
        ng = len(order)
        mul = [[0] * ng for _ in range(ng)]
        for a, pa in enumerate(order):
            for b, pb in enumerate(order):
                # row a, column b is a*b, acting as "apply b, then a"
                comp = tuple(pa[pb[i]] for i in range(n))
                mul[a][b] = perm_index[comp]
        group = FiniteGroup(tuple(names[p] for p in order), mul, _validated=True)
        return cls(poset, group, order, _validated=True)

    # -- orbits and stabilizers --------------------------------------------

    def orbit(self, x):
        i = self.poset.index(x)
        return tuple(self.poset.elements[j] for j in self._orbits[self._orbit_of[i]])

    def orbits(self):
        return [
            tuple(self.poset.elements[j] for j in orb) for orb in self._orbits
        ]

    def orbit_index_of(self, i):
        return self._orbit_of[i]

    def orbit_indices(self):
        return self._orbits

    def orbit_reps(self):
        """One representative per orbit: the member with least index."""
        return tuple(self.poset.elements[orb[0]] for orb in self._orbits)

    def stabilizer(self, x):
        i = self.poset.index(x)
        members = [g for g in range(len(self.group.elements)) if self.act[g][i] == i]
        return Subgroup(self.group, members)

    def transporter(self, i):
        """(orbit index, g) with i = g . rep for the orbit's representative."""
        k = self._orbit_of[i]
        rep = self._orbits[k][0]
        for g in range(len(self.group.elements)):
            if self.act[g][rep] == i:
                return k, g
        raise NotEquivariant("orbit bookkeeping is inconsistent")

    def saturate_mask(self, mask):
        out = 0
        for row in self.act:
            m = mask
            while m:
                i = (m & -m).bit_length() - 1
                out |= 1 << row[i]
                m &= m - 1
        return out

    def saturate(self, elems):
        """G.V, the smallest invariant superset of V."""
        mask = self.poset.mask_of_elements(elems)
        return self.poset.elements_of_mask(self.saturate_mask(mask))

    def is_invariant_mask(self, mask):
        return self.saturate_mask(mask) == mask

    # -- fixed points -------------------------------------------------------

    def fixed_point_mask(self, subgroup):
        n = len(self.poset.elements)
        mask = 0
        for i in range(n):
            if all(self.act[g][i] == i for g in subgroup.members):
                mask |= 1 << i
        return mask

    def fixed_points(self, subgroup):
        """The subposet X^H of points fixed by every element of H."""
        mask = self.fixed_point_mask(subgroup)
        return self.poset.subposet(self.poset.elements_of_mask(mask))

    def is_g_connected(self):
        """True when X^H is path-connected for every subgroup H.

        An empty fixed-point set counts as connected, consistent with the
        empty-space convention; g_connectedness_detail reports which
        subgroups hit that convention.
        """
        return all(
            self.fixed_points(H).is_path_connected()
            for H in all_subgroups(self.group)
        )

    def g_connectedness_detail(self):
        detail = []
        for H in all_subgroups(self.group):
            sub = self.fixed_points(H)
            detail.append(
                {
                    "subgroup": list(H.element_names()),
                    "fixed_points": list(sub.elements),
                    "path_connected": sub.is_path_connected(),
                    "empty_convention_used": len(sub) == 0,
                }
            )
        return detail

    def orbit_subspace_is_discrete(self, x):
        """Distinct members of an orbit are pairwise incomparable.

        Always true for a valid monotone action; exposed as a validator.
        """
        orb = [self.poset.index(y) for y in self.orbit(x)]
        for a in orb:
            for b in orb:
                if a != b and self.poset.leq_idx(a, b):
                    return False
        return True

    # -- constructions --------------------------------------------------------

    def product(self, other):
        """Product G-poset with the diagonal action; groups must coincide."""
        if other.group is not self.group:
            raise NotEquivariant("product needs both factors to share one group")
        prod = self.poset.product(other.poset)
        n2 = len(other.poset.elements)
        act = []
        for g in range(len(self.group.elements)):
            r1, r2 = self.act[g], other.act[g]
            row = [0] * len(prod.elements)
            for i in range(len(self.poset.elements)):
                for j in range(n2):
                    row[i * n2 + j] = r1[i] * n2 + r2[j]
            act.append(tuple(row))
        return GPoset(prod, self.group, act, _validated=True)

    def diagonal(self):
        """The G-poset X x X with g.(x, y) = (g.x, g.y)."""
        return self.product(self)

    def subgposet_mask(self, mask):
        """Restriction to an invariant subset, as a GPoset of its own."""
        if not self.is_invariant_mask(mask):
            raise NotInvariant("restriction requires an invariant subset")
        elems = self.poset.elements_of_mask(mask)
        sub = self.poset.subposet(elems)
        old_idx = [self.poset.index(x) for x in elems]
        pos = {i: p for p, i in enumerate(old_idx)}
        act = []
        for g in range(len(self.group.elements)):
            act.append(tuple(pos[self.act[g][i]] for i in old_idx))
        return GPoset(sub, self.group, act, _validated=True)

    def orbit_poset(self):
        """The orbits, ordered by o <= o' iff some member of o sits below o'.

        Monotone bijections make this antisymmetric, so it is a genuine
        poset; its downsets are exactly the invariant open subsets of X.
        """
        reps = self.orbit_reps()
        k = len(reps)
        up = [0] * k
        for a in range(k):
            for b in range(k):
                ia = self.poset.index(reps[a])
                found = False
                for j in self._orbits[b]:
                    if self.poset.leq_idx(ia, j):
                        found = True
                        break
                if found:
                    up[a] |= 1 << b
        return FinitePoset(reps, up)

    def orbit_downset_to_mask(self, orbit_set):
        """Element mask of a union of orbits given by orbit indices."""
        mask = 0
        for k in orbit_set:
            for i in self._orbits[k]:
                mask |= 1 << i
        return mask

    def __repr__(self):
        return (
            f"GPoset({len(self.poset.elements)} elements, "
            f"group order {len(self.group.elements)})"
        )
