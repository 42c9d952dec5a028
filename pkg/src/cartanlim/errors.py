"""Exception types shared across the package."""


class CartanlimError(Exception):
    """Base class for every failure raised by this package."""


# --- exact linear algebra ---------------------------------------------------

class NonSquareError(CartanlimError):
    pass


class SingularError(CartanlimError):
    pass


class DimensionMismatchError(CartanlimError):
    pass


class EmptyInputError(CartanlimError):
    pass


# --- projective geometry ----------------------------------------------------

class ZeroVectorError(CartanlimError):
    pass


class DegenerateBasisError(CartanlimError):
    pass


class NotAugmentedBasisError(CartanlimError):
    pass


class CapExceededError(CartanlimError):
    """Permutation enumeration would exceed the configured cap."""


class SizeMismatchError(CartanlimError):
    pass


# --- seed matrices and the limit family --------------------------------------

class ZeroRowError(CartanlimError):
    pass


class TooFewRowsError(CartanlimError):
    pass


class IndexOutOfRangeError(CartanlimError):
    pass


class NotGenericError(CartanlimError):
    pass


class ShapeMismatchError(CartanlimError):
    pass


class DegenerateAlphaError(CartanlimError):
    pass


# --- degeneration traces ------------------------------------------------------

class NonpositiveRError(CartanlimError):
    pass


class ZeroFirstColumnError(CartanlimError):
    pass


class NoPositiveRootError(CartanlimError):
    pass


# --- obstruction checks -------------------------------------------------------

class UnknownNameError(CartanlimError):
    pass


class SampleCapExceededError(CartanlimError):
    """The certifying sample would exceed the configured cap."""


# --- dimension bounds ----------------------------------------------------------

class InvalidShapeError(CartanlimError):
    pass


class KTooSmallError(CartanlimError):
    pass


# --- input parsing ---------------------------------------------------------------

class ParseError(CartanlimError):
    pass
