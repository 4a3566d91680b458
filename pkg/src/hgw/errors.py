"""Exception hierarchy shared by every hgw module."""


class HGWError(Exception):
    """Base class for all errors raised by hgw."""


class GraphFormatError(HGWError):
    """Input text could not be turned into a valid graph."""


class MalformedLine(GraphFormatError):
    def __init__(self, lineno: int, line: str, reason: str = "expected 'u v w'"):
        self.lineno = lineno
        self.line = line
        super().__init__(f"line {lineno}: {reason}: {line.strip()!r}")


class NegativeWeight(GraphFormatError):
    pass


class ConflictingDuplicateEdge(GraphFormatError):
    pass


class NotSymmetric(HGWError):
    pass


class NonFinite(HGWError):
    pass


class ConvergenceFailure(HGWError):
    pass


class DisconnectedGraph(HGWError):
    pass


class SingularSystem(DisconnectedGraph):
    """Linear system (Laplacian + J/N) is singular; the graph is disconnected."""


class NonIntrinsicMetric(HGWError):
    pass


class QuadratureNonconvergence(HGWError):
    pass


class DimensionMismatch(HGWError, ValueError):
    pass


class InvalidSpectrumRange(HGWError, ValueError):
    pass


class EmptyScaleSet(HGWError, ValueError):
    pass


class NonpositiveScale(HGWError, ValueError):
    pass


class NegativeTime(HGWError, ValueError):
    pass


class NonpositiveTime(HGWError, ValueError):
    pass


class NonpositiveJump(HGWError, ValueError):
    pass
