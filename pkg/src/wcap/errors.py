"""Exception hierarchy shared by all solver modules."""


class WcapError(Exception):
    """Base class for every error raised by this package."""


class MalformedInput(WcapError, ValueError):
    pass


class NotACactus(WcapError, ValueError):
    pass


class Disconnected(WcapError, ValueError):
    pass


class UnknownVertex(WcapError, ValueError):
    pass


class InvalidParams(WcapError, ValueError):
    pass


class TooLarge(WcapError, ValueError):
    pass


class Infeasible(WcapError):
    """No subset of the available links covers every minimum cut."""


class SolverTimeout(WcapError):
    """The exact solver hit its time limit.

    Carries the best solution found so far (``incumbent``, possibly ``None``)
    and the best proven lower bound on the optimum.
    """

    def __init__(self, incumbent, lower_bound):
        super().__init__(f"time limit reached (lower bound {lower_bound})")
        self.incumbent = incumbent
        self.lower_bound = lower_bound
