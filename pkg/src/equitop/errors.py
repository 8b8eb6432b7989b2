"""Exception hierarchy shared by all equitop modules."""


class EquitopError(Exception):
    """Base class for all errors raised by this package."""


class CycleError(EquitopError):
    """Cover relations whose closure violates antisymmetry."""


class UnknownElement(EquitopError):
    """An element identifier that the poset/complex does not declare."""


class NotMonotone(EquitopError):
    """A map that fails x <= y implies f(x) <= f(y)."""


class NotBijective(EquitopError):
    """A generator that is not a permutation of the underlying elements."""


class NotEquivariant(EquitopError):
    """A map that fails f(g.x) = g.f(x)."""


class NotSimplicial(EquitopError):
    """A vertex map whose image of some simplex is not a simplex."""


class NotInvariant(EquitopError):
    """A subset that is not closed under the group action."""


class NotOpen(EquitopError):
    """A subset that is not downward closed."""


class MapNotInPoset(EquitopError):
    """A fence endpoint that does not belong to the given hom-poset."""


class MalformedCover(EquitopError):
    """A user-supplied cover that fails structural validation."""


class ConstructionFailed(EquitopError):
    """An explicit certificate construction produced an invalid object.

    This signals an implementation bug: the constructions used here are
    guaranteed to exist, so a failed runtime re-verification must never
    be silently swallowed.
    """


class VerificationFailed(EquitopError):
    """A certificate that does not re-verify from scratch."""


class BudgetExceeded(EquitopError):
    """A search or enumeration ran past its configured budget."""


class SizeBudgetExceeded(BudgetExceeded):
    """A construction (subdivision, product) would exceed the element cap."""


class ClosureBudgetExceeded(BudgetExceeded):
    """Generator closure grew past the configured group-order cap."""


class InvalidDocument(EquitopError):
    """An input document that does not match the expected schema."""
