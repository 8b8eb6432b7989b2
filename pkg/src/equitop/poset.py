"""Finite posets as finite T0 spaces.

A finite T0 space and a finite poset are the same data: open sets are
exactly the downward-closed subsets and continuous maps are exactly the
monotone ones.  Everything downstream (group actions, subdivision, the
invariant engines) is built on the three types defined here.

The order relation is kept as dense reachability bitmasks after closure,
so `leq` queries are O(1); element iteration order is the input order and
is part of the contract, because certificates must be reproducible.
"""

from __future__ import annotations

import numpy as np

from .errors import (
    BudgetExceeded,
    CycleError,
    NotMonotone,
    NotOpen,
    UnknownElement,
)


class FinitePoset:
    """Immutable finite poset over hashable, distinct element identifiers."""

    __slots__ = ("elements", "_index", "_up", "_down")

    def __init__(self, elements, up_masks, _validated=False):
        self.elements = tuple(elements)
        self._index = {x: i for i, x in enumerate(self.elements)}
        if len(self._index) != len(self.elements):
            raise CycleError("duplicate element identifiers")
        self._up = tuple(up_masks)
        n = len(self.elements)
        down = [0] * n
        for i in range(n):
            m = self._up[i]
            while m:
                j = (m & -m).bit_length() - 1
                down[j] |= 1 << i
                m &= m - 1
        self._down = tuple(down)
        if not _validated:
            self._validate()

    def _validate(self):
        n = len(self.elements)
        for i in range(n):
            if not (self._up[i] >> i) & 1:
                raise CycleError(f"order not reflexive at {self.elements[i]!r}")
        for i in range(n):
            m = self._up[i] & ~(1 << i)
            while m:
                j = (m & -m).bit_length() - 1
                if (self._up[j] >> i) & 1:
                    raise CycleError(
                        f"antisymmetry violated between {self.elements[i]!r} "
                        f"and {self.elements[j]!r}"
                    )
                if self._up[j] & ~self._up[i]:
                    raise CycleError("order not transitive")
                m &= m - 1

    # -- constructors ---------------------------------------------------

    @classmethod
    def from_cover_relations(cls, elements, covers):
        """Build the reflexive-transitive closure of cover pairs (low, high).

        Raises CycleError when the closure is not antisymmetric and
        UnknownElement when a cover mentions an undeclared element.
        """
        elements = tuple(elements)
        index = {x: i for i, x in enumerate(elements)}
        if len(index) != len(elements):
            raise CycleError("duplicate element identifiers")
        n = len(elements)
        up = [1 << i for i in range(n)]
        for lo, hi in covers:
            if lo not in index:
                raise UnknownElement(f"unknown element {lo!r} in cover relation")
            if hi not in index:
                raise UnknownElement(f"unknown element {hi!r} in cover relation")
            up[index[lo]] |= 1 << index[hi]
        # Warshall closure on bitmask rows.
        for k in range(n):
            mk = up[k]
            for i in range(n):
                if (up[i] >> k) & 1:
                    up[i] |= mk
        for i in range(n):
            m = up[i] & ~(1 << i)
            while m:
                j = (m & -m).bit_length() - 1
                if (up[j] >> i) & 1:
                    raise CycleError(
                        f"cover relations force a cycle through "
                        f"{elements[i]!r} and {elements[j]!r}"
                    )
                m &= m - 1
        return cls(elements, up, _validated=True)

    @classmethod
    def from_leq_matrix(cls, elements, matrix):
        """Build from an explicit boolean relation matrix; validates axioms."""
        arr = np.asarray(matrix, dtype=bool)
        n = len(tuple(elements))
        if arr.shape != (n, n):
            raise CycleError(f"relation matrix must be {n}x{n}, got {arr.shape}")
        up = [0] * n
        for i in range(n):
            m = 0
            for j in range(n):
                if arr[i, j]:
                    m |= 1 << j
            up[i] = m
        return cls(elements, up)

    # -- basic queries ---------------------------------------------------

    def __len__(self):
        return len(self.elements)

    def __repr__(self):
        return f"FinitePoset({len(self.elements)} elements)"

    def index(self, x):
        try:
            return self._index[x]
        except KeyError:
            raise UnknownElement(f"unknown element {x!r}") from None

    def __contains__(self, x):
        return x in self._index

    def leq(self, x, y):
        return (self._up[self.index(x)] >> self.index(y)) & 1 == 1

    def leq_idx(self, i, j):
        return (self._up[i] >> j) & 1 == 1

    def up_mask(self, i):
        return self._up[i]

    def down_mask(self, i):
        return self._down[i]

    @property
    def leq_matrix(self):
        n = len(self.elements)
        arr = np.zeros((n, n), dtype=bool)
        for i in range(n):
            m = self._up[i]
            while m:
                j = (m & -m).bit_length() - 1
                arr[i, j] = True
                m &= m - 1
        return arr

    def elements_of_mask(self, mask):
        return tuple(
            self.elements[i] for i in range(len(self.elements)) if (mask >> i) & 1
        )

    def mask_of_elements(self, elems):
        mask = 0
        for x in elems:
            mask |= 1 << self.index(x)
        return mask

    def is_downset_mask(self, mask):
        m = mask
        while m:
            i = (m & -m).bit_length() - 1
            if self._down[i] & ~mask:
                return False
            m &= m - 1
        return True

    def maximal_indices(self, mask=None):
        n = len(self.elements)
        if mask is None:
            mask = (1 << n) - 1
        out = []
        for i in range(n):
            if (mask >> i) & 1 and not (self._up[i] & mask & ~(1 << i)):
                out.append(i)
        return out

    def minimal_indices(self, mask=None):
        n = len(self.elements)
        if mask is None:
            mask = (1 << n) - 1
        out = []
        for i in range(n):
            if (mask >> i) & 1 and not (self._down[i] & mask & ~(1 << i)):
                out.append(i)
        return out

    def linear_extension(self):
        """Indices in an order where smaller elements always come first."""
        n = len(self.elements)
        order = sorted(range(n), key=lambda i: (bin(self._down[i]).count("1"), i))
        return order

    # -- open sets --------------------------------------------------------

    def down_closure(self, x):
        """U_x, the smallest open set containing x."""
        i = self.index(x)
        return Downset(self, self._down[i])

    def all_downset_masks(self, max_count=None):
        """Every downward-closed subset, each exactly once, in a fixed order.

        Enumeration walks a linear extension, branching exclude-first, so the
        empty set comes first and the order never depends on anything but the
        element order.  Raises BudgetExceeded past max_count.
        """
        order = self.linear_extension()
        n = len(order)
        down = self._down
        emitted = 0

        def rec(pos, mask):
            nonlocal emitted
            if pos == n:
                if max_count is not None and emitted >= max_count:
                    raise BudgetExceeded(
                        f"downset enumeration passed the cap of {max_count}"
                    )
                emitted += 1
                yield mask
                return
            i = order[pos]
            yield from rec(pos + 1, mask)
            if down[i] & ~mask == 1 << i:
                yield from rec(pos + 1, mask | (1 << i))

        yield from rec(0, 0)

    def all_downsets(self, max_count=None):
        for mask in self.all_downset_masks(max_count=max_count):
            yield Downset(self, mask)

    # -- constructions ----------------------------------------------------

    def product(self, other):
        """Componentwise-ordered product; elements are (x, y) pairs."""
        elems = []
        for x in self.elements:
            for y in other.elements:
                elems.append((x, y))
        n2 = len(other.elements)
        up = []
        for i in range(len(self.elements)):
            for j in range(n2):
                mask = 0
                mi = self._up[i]
                while mi:
                    a = (mi & -mi).bit_length() - 1
                    mj = other._up[j]
                    while mj:
                        b = (mj & -mj).bit_length() - 1
                        mask |= 1 << (a * n2 + b)
                        mj &= mj - 1
                    mi &= mi - 1
                up.append(mask)
        return FinitePoset(elems, up, _validated=True)

    def subposet(self, elems):
        """Induced subposet on the given elements, in their given order."""
        idx = [self.index(x) for x in elems]
        pos = {i: p for p, i in enumerate(idx)}
        up = []
        for i in idx:
            mask = 0
            m = self._up[i]
            while m:
                j = (m & -m).bit_length() - 1
                if j in pos:
                    mask |= 1 << pos[j]
                m &= m - 1
            up.append(mask)
        return FinitePoset(tuple(elems), up, _validated=True)

    def dual(self):
        return FinitePoset(self.elements, self._down, _validated=True)

    # -- connectivity -----------------------------------------------------

    def comparability_mask(self, i):
        return (self._up[i] | self._down[i]) & ~(1 << i)

    def component_mask(self, i):
        seen = 1 << i
        frontier = [i]
        while frontier:
            j = frontier.pop()
            m = (self._up[j] | self._down[j]) & ~seen
            while m:
                k = (m & -m).bit_length() - 1
                seen |= 1 << k
                frontier.append(k)
                m &= m - 1
        return seen

    def is_path_connected(self):
        """True when the comparability graph is connected.

        The empty poset counts as connected by convention, so vacuous
        covers never need special-casing; see the package docs.
        """
        n = len(self.elements)
        if n == 0:
            return True
        return self.component_mask(0) == (1 << n) - 1

    def connect_with_path(self, x, y):
        """A monotone map J_n -> P with n = #(P), from x to y, or None.

        Searches the shortest zigzag (even positions step up, odd step
        down, staying put is free) and pads it with the endpoint.
        """
        from .interval import combinatorial_interval

        i0, i1 = self.index(x), self.index(y)
        n = len(self.elements)
        # state: (element, parity of position); BFS over positions
        prev = {(i0, 0): None}
        frontier = [(i0, 0)]
        goal = None
        if i0 == i1:
            goal = (i0, 0)
        k = 0
        while goal is None and frontier and k < n:
            k += 1
            nxt = []
            for (e, par) in frontier:
                moves = self._up[e] if par == 0 else self._down[e]
                m = moves
                while m:
                    f = (m & -m).bit_length() - 1
                    st = (f, 1 - par)
                    if st not in prev:
                        prev[st] = (e, par)
                        nxt.append(st)
                        if f == i1 and goal is None:
                            goal = st
                    m &= m - 1
            frontier = nxt
        if goal is None:
            return None
        seq = []
        st = goal
        while st is not None:
            seq.append(st[0])
            st = prev[st]
        seq.reverse()
        seq.extend([i1] * (n + 1 - len(seq)))
        jn = combinatorial_interval(n)
        values = tuple(seq)
        return MonotoneMap(jn, self, values)


class Downset:
    """A downward-closed subset of a poset (an open set of the T0 space)."""

    __slots__ = ("poset", "mask")

    def __init__(self, poset, mask_or_elems):
        self.poset = poset
        if isinstance(mask_or_elems, int):
            self.mask = mask_or_elems
        else:
            self.mask = poset.mask_of_elements(mask_or_elems)
        if not poset.is_downset_mask(self.mask):
            raise NotOpen("subset is not downward closed")

    @property
    def elements(self):
        return self.poset.elements_of_mask(self.mask)

    def __len__(self):
        return bin(self.mask).count("1")

    def __contains__(self, x):
        return (self.mask >> self.poset.index(x)) & 1 == 1

    def __iter__(self):
        return iter(self.elements)

    def __eq__(self, other):
        return (
            isinstance(other, Downset)
            and self.poset is other.poset
            and self.mask == other.mask
        )

    def __hash__(self):
        return hash((id(self.poset), self.mask))

    def __repr__(self):
        return f"Downset({list(self.elements)!r})"

    def union(self, other):
        return Downset(self.poset, self.mask | other.mask)

    def intersection(self, other):
        return Downset(self.poset, self.mask & other.mask)


class MonotoneMap:
    """A monotone (continuous) map between finite posets.

    Values are stored per domain index; maps are hashable and compare by
    value so they can serve as search states.
    """

    __slots__ = ("dom", "cod", "values")

    def __init__(self, dom, cod, values, validate=True):
        self.dom = dom
        self.cod = cod
        self.values = tuple(values)
        if len(self.values) != len(dom.elements):
            raise NotMonotone("assignment must be total on the domain")
        if validate:
            self._validate()

    def _validate(self):
        up = self.dom._up
        vals = self.values
        for i in range(len(vals)):
            m = up[i] & ~(1 << i)
            while m:
                j = (m & -m).bit_length() - 1
                if not self.cod.leq_idx(vals[i], vals[j]):
                    raise NotMonotone(
                        f"map violates monotonicity: {self.dom.elements[i]!r} <= "
                        f"{self.dom.elements[j]!r} but images are incomparable "
                        f"or reversed"
                    )
                m &= m - 1

    @classmethod
    def from_dict(cls, dom, cod, mapping, validate=True):
        values = tuple(cod.index(mapping[x]) for x in dom.elements)
        return cls(dom, cod, values, validate=validate)

    @classmethod
    def identity(cls, poset):
        return cls(poset, poset, tuple(range(len(poset.elements))), validate=False)

    @classmethod
    def constant(cls, dom, cod, value):
        j = cod.index(value)
        return cls(dom, cod, (j,) * len(dom.elements), validate=False)

    @classmethod
    def inclusion(cls, sub, ambient):
        return cls(sub, ambient, tuple(ambient.index(x) for x in sub.elements))

    def __call__(self, x):
        return self.cod.elements[self.values[self.dom.index(x)]]

    def as_dict(self):
        return {
            x: self.cod.elements[self.values[i]]
            for i, x in enumerate(self.dom.elements)
        }

    def image_indices(self):
        return sorted(set(self.values))

    def compose(self, other):
        """self after other: (self . other)(x) = self(other(x))."""
        if other.cod is not self.dom and other.cod.elements != self.dom.elements:
            raise NotMonotone("composition domains do not line up")
        values = tuple(self.values[v] for v in other.values)
        return MonotoneMap(other.dom, self.cod, values, validate=False)

    def restrict(self, sub):
        """Restriction to a subposet whose elements all belong to dom."""
        values = tuple(self.values[self.dom.index(x)] for x in sub.elements)
        return MonotoneMap(sub, self.cod, values, validate=False)

    def leq(self, other):
        if self.dom.elements != other.dom.elements or self.cod is not other.cod:
            raise ValueError("maps live in different hom-posets")
        return all(
            self.cod.leq_idx(a, b) for a, b in zip(self.values, other.values)
        )

    def comparable(self, other):
        return self.leq(other) or other.leq(self)

    def __eq__(self, other):
        return (
            isinstance(other, MonotoneMap)
            and self.dom.elements == other.dom.elements
            and self.cod is other.cod
            and self.values == other.values
        )

    def __hash__(self):
        return hash(self.values)

    def __repr__(self):
        return f"MonotoneMap({len(self.dom.elements)} -> {self.cod!r})"
