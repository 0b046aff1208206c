"""Exception hierarchy shared by all topoforge modules."""


class TopologyError(Exception):
    """Base class for domain errors (CLI exit code 3)."""


class NotRegular(TopologyError):
    pass


class NotSimple(TopologyError):
    pass


class Disconnected(TopologyError):
    pass


class RingMissing(TopologyError):
    pass


class BadParams(TopologyError, ValueError):
    pass


class OverlapEdge(TopologyError):
    pass


class GirthUndefined(TopologyError):
    pass


class InitFailure(TopologyError):
    pass


class NoGraphFound(TopologyError):
    """Raised when an exhaustive search finds no graph satisfying its filters."""


class DegenerateInput(TopologyError, ValueError):
    pass


class MixedSizes(TopologyError):
    pass


class ParseError(TopologyError, ValueError):
    """Malformed spec string or graph file (CLI exit code 2)."""


class TooLarge(TopologyError):
    """Instance exceeds a budget guard (CLI exit code 4)."""
