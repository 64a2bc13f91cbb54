"""Exception hierarchy shared by all modules.

Every domain error carries a ``kind`` string and a ``detail`` dict so that the
CLI can emit a machine-readable error object without special casing.
"""


class NormSurfError(Exception):
    kind = "error"

    def __init__(self, message, **detail):
        super().__init__(message)
        self.detail = detail

    def to_json(self):
        return {"error": self.kind, "message": str(self), **self.detail}


class ParseError(NormSurfError):
    kind = "ParseError"


class GluingError(NormSurfError):
    kind = "GluingError"


class NotOneVertex(NormSurfError):
    kind = "NotOneVertex"


class DimensionMismatch(NormSurfError):
    kind = "DimensionMismatch"


class IncompatibleSummands(NormSurfError):
    kind = "IncompatibleSummands"


class ResourceLimit(NormSurfError):
    kind = "ResourceLimit"


class NotDecomposable(NormSurfError):
    kind = "NotDecomposable"


class Unsupported(NormSurfError):
    kind = "Unsupported"


class NotATorus(NormSurfError):
    kind = "NotATorus"


class EmptySupport(NormSurfError):
    kind = "EmptySupport"


class NotCarried(NormSurfError):
    kind = "NotCarried"


class UnknownComponent(NormSurfError):
    kind = "UnknownComponent"


class NotBalanced(NormSurfError):
    kind = "NotBalanced"


class OpenArcs(NormSurfError):
    kind = "OpenArcs"


class NotIsolated(NormSurfError):
    kind = "NotIsolated"


class NotAdmissible(NormSurfError):
    kind = "NotAdmissible"
