"""Exception hierarchy shared by all modules.

Every error raised on purpose by the library derives from
:class:`LiouvilleError` and carries a short ``kind`` string plus an optional
``witness`` mapping, which the command-line front end serializes verbatim.
"""


class LiouvilleError(Exception):
    kind = "LiouvilleError"

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.message = message
        self.witness = dict(witness or {})

    def to_dict(self):
        return {"kind": self.kind, "message": self.message,
                "witness": self.witness}


class DomainError(LiouvilleError, ValueError):
    kind = "DomainError"


class PoleEncountered(DomainError):
    """Argument lies on (or within the proximity guard of) a pole."""
    kind = "PoleEncountered"


class PoleCollision(DomainError):
    """A left-extending and a right-extending pole lattice overlap."""
    kind = "PoleCollision"


class PoleTooClose(DomainError):
    kind = "PoleTooClose"


class ConvergenceDomain(DomainError):
    """Contour integral does not converge for these parameters."""
    kind = "ConvergenceDomain"


class DegenerateConnection(DomainError):
    kind = "DegenerateConnection"


class BranchAmbiguity(DomainError):
    kind = "BranchAmbiguity"


class CoincidentPoints(DomainError):
    kind = "CoincidentPoints"


class NumericalError(LiouvilleError, ArithmeticError):
    kind = "NumericalError"


class SubdivisionLimit(NumericalError):
    kind = "SubdivisionLimit"


class NonFiniteIntegrand(NumericalError):
    kind = "NonFiniteIntegrand"


class NonFiniteValue(NumericalError):
    kind = "NonFiniteValue"


class DivergentSequence(NumericalError):
    kind = "DivergentSequence"


class NonConvergent(NumericalError):
    kind = "NonConvergent"
