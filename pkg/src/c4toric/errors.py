"""Exception types shared across the package."""


class InvalidParameter(ValueError):
    """A numeric or categorical argument is outside its allowed domain."""


class DimensionError(ValueError):
    """Operator lengths or qubit indices are inconsistent."""


class ParityError(RuntimeError):
    """An odd number of defects reached the matcher.

    Torus syndromes always have even parity per sublattice, so this signals a
    simulation bug rather than bad luck.
    """


class ContractViolation(AssertionError):
    """An internal pre/post-condition failed (for instance a decoder left a
    residual with nontrivial syndrome)."""


class ConstructionError(RuntimeError):
    """A schedule or code could not be built; the message names the violated
    constraint."""


class BudgetExceeded(RuntimeError):
    """An exhaustive search would exceed its combinatorial budget."""
