"""Exception taxonomy with stable codes for CLI reporting.

Exit code convention: 1 means the mathematics said no (a relation fails,
an identity does not hold, an obstruction was found); 2 means the input
was unusable (bad schema, mismatched rings, missing witness data).
"""


class AinftyError(Exception):
    code = "error"
    exit_code = 2

    def __init__(self, message="", witness=None):
        super().__init__(message)
        self.witness = witness


class RingMismatch(AinftyError):
    code = "ring-mismatch"


class NotInvertible(AinftyError):
    code = "not-invertible"


class UnsupportedRing(AinftyError):
    code = "unsupported-ring"


class DegreeMismatch(AinftyError):
    code = "degree-mismatch"


class SchemaError(AinftyError):
    code = "schema-error"


class NotDg(AinftyError):
    code = "not-dg"


class ArityUnderflow(AinftyError):
    code = "arity-underflow"


class NotAInfty(AinftyError):
    """Bar differential fails d*d = 0; carries the witness word."""

    code = "not-a-infinity"
    exit_code = 1


class SplitUnitsRequired(AinftyError):
    code = "split-units-required"


class SplittingMissing(AinftyError):
    """A filtration level does not split as graded modules."""

    code = "splitting-missing"
    exit_code = 1


class BadGrHomotopy(AinftyError):
    """A supplied graded-piece homotopy fails id = d h + h d."""

    code = "bad-gr-homotopy"
    exit_code = 1


class OutOfScopeBidegree(AinftyError):
    code = "out-of-scope-bidegree"


class NotUnital(AinftyError):
    code = "not-unital"
    exit_code = 1


class NotNatural(AinftyError):
    code = "not-natural"
    exit_code = 1


class NotAHomotopy(AinftyError):
    code = "not-a-homotopy"
    exit_code = 1


class VerificationFailure(AinftyError):
    """A certificate identity failed on re-verification."""

    code = "verification-failure"
    exit_code = 1
