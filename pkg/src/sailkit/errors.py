"""Exception hierarchy shared by every sailkit module.

Each error class carries the name used in machine-readable CLI error objects.
"""


class SailkitError(Exception):
    """Base class; ``code`` is the stable identifier reported by the CLI."""

    code = "SailkitError"

    def __init__(self, message="", **details):
        super().__init__(message or self.code)
        self.details = details

    def to_json(self):
        out = {"error": self.code, "message": str(self)}
        if self.details:
            out["details"] = {k: _plain(v) for k, v in self.details.items()}
        return out


def _plain(v):
    if isinstance(v, (str, int, bool)) or v is None:
        return v if not isinstance(v, int) or isinstance(v, bool) else str(v)
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _plain(x) for k, x in v.items()}
    return str(v)


def _make(name, doc):
    return type(name, (SailkitError,), {"code": name, "__doc__": doc})


NonSquare = _make("NonSquare", "Matrix operation requires a square matrix.")
ZeroVector = _make("ZeroVector", "Primitive vector of the zero vector requested.")
DegenerateSegment = _make("DegenerateSegment", "Segment endpoints coincide.")
NoCommonEndpoint = _make("NoCommonEndpoint", "Segments do not share an endpoint.")
ParallelSegments = _make("ParallelSegments", "Segments are parallel; integer angle is 0.")
PointOnPlane = _make("PointOnPlane", "Point lies in the affine hull of the face.")
IrrationalHull = _make("IrrationalHull", "Affine hull of the face contains no lattice points.")
TooFewEdges = _make("TooFewEdges", "Edge star has fewer than n edges.")
TooFewVertices = _make("TooFewVertices", "Face has fewer than n vertices.")
ComplexEigenvalueSelected = _make("ComplexEigenvalueSelected", "A selected eigenvalue is not real.")
DefectiveEigenvalue = _make("DefectiveEigenvalue", "Selected eigenvalue has no simple eigenray.")
HeightNotPositive = _make("HeightNotPositive", "Height bound must be positive.")
EmptyPatch = _make("EmptyPatch", "No lattice points or no certified faces in the patch.")
NotInvariant = _make("NotInvariant", "Operator does not preserve the cone.")
IncompleteVertex = _make("IncompleteVertex", "Vertex has uncertified incident faces.")
DegenerateConfiguration = _make("DegenerateConfiguration", "Configuration has no affine basis.")
ChainTooShort = _make("ChainTooShort", "Chain shorter than the window size.")
Definition3Violation = _make("Definition3Violation", "Chain window violates the periodic-chain side conditions.")
NoPeriod = _make("NoPeriod", "No periodic colouring detected on the chain.")
VerificationFailed = _make("VerificationFailed", "Candidate shift operator failed verification on the chain.")
P1Violated = _make("P1Violated", "Linear part has eigenvalue 1.")
NonIntegralFixedData = _make("NonIntegralFixedData", "Fixed point of the affine map is not integral.")
ConeNotInvariant = _make("ConeNotInvariant", "Operator does not preserve the cone.")
CoordinateZero = _make("CoordinateZero", "Probe vector has a zero coordinate.")
PreconditionViolated = _make("PreconditionViolated", "Lemma preconditions are not satisfied.")
MalformedInstance = _make("MalformedInstance", "Instance is not well formed.")
NotATriangulation = _make("NotATriangulation", "Simplices do not partition the boundary.")
FaceNotIncident = _make("FaceNotIncident", "Face does not contain the vertex.")
NotContained = _make("NotContained", "Polyhedron is not contained in the enclosing polyhedron.")
UnsupportedDegree = _make("UnsupportedDegree", "Only rational and quadratic inputs are supported.")
NotASurd = _make("NotASurd", "Input is not a quadratic irrational.")
DependentForms = _make("DependentForms", "Linear forms are linearly dependent.")
WrongDimension = _make("WrongDimension", "Operation is defined only in a different dimension.")
InvalidInput = _make("InvalidInput", "Input value failed validation.")
