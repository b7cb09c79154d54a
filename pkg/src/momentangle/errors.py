"""Exception hierarchy shared by every module."""


class MomentAngleError(Exception):
    """Base class for all library errors."""


class GhostVertex(MomentAngleError):
    def __init__(self, vertex):
        super().__init__(f"vertex {vertex} lies in no facet")
        self.vertex = vertex


class VertexOutOfRange(MomentAngleError):
    pass


class FaceNotInComplex(MomentAngleError):
    pass


class NotPrime(MomentAngleError):
    pass


class DependentColumns(MomentAngleError):
    pass


class NotInImage(MomentAngleError):
    pass


class NotACycle(MomentAngleError):
    pass


class NotPure(MomentAngleError):
    pass


class BudgetExceeded(MomentAngleError):
    def __init__(self, m, cap):
        super().__init__(f"m={m} exceeds the configured cap {cap}")
        self.m = m
        self.cap = cap


class GateFailure(MomentAngleError):
    """A manifold hypothesis required by a method does not hold."""


class NotAManifold(GateFailure):
    pass


class NotOrientable(GateFailure):
    pass


class InternalInconsistency(MomentAngleError):
    """Two independent computations disagreed; always an implementation bug."""


class NonCommutingFunctor(MomentAngleError):
    def __init__(self, J, x, y):
        super().__init__(f"square at J={J:#x} with x={x}, y={y} does not commute")
        self.J, self.x, self.y = J, x, y


class NotASubfunctor(MomentAngleError):
    pass


class ParseError(MomentAngleError):
    def __init__(self, line, message="cannot parse"):
        super().__init__(f"line {line}: {message}")
        self.line = line
