"""Exception types shared across the package.

Every numerical failure mode is a distinct class so callers (and the CLI)
can report which stage failed and at what tolerance.
"""


class IonlabError(Exception):
    """Base class for all package errors."""


class TailNotConverged(IonlabError):
    """An integrand still carries weight in the outermost grid decade.

    Raised instead of silently truncating an integral whose tail
    contribution exceeds the configured fraction of the total.
    """

    def __init__(self, what, fraction, limit):
        self.what = what
        self.fraction = fraction
        self.limit = limit
        super().__init__(
            f"{what}: outer-decade contribution {fraction:.3e} exceeds {limit:.1e}; "
            f"enlarge r_max"
        )


class ZeroProfile(IonlabError):
    """A ratio was requested for an identically vanishing profile."""


class ZeroDensity(ZeroProfile):
    """A density functional was requested for a zero density."""


class NotConverged(IonlabError):
    """An iterative solver hit its iteration cap before reaching tolerance."""

    def __init__(self, what, detail=""):
        self.what = what
        super().__init__(f"{what} did not converge{': ' + detail if detail else ''}")


class Unbound(IonlabError):
    """The mean-field problem has no negative eigenvalue at the requested mass."""

    def __init__(self, Z, N, iteration):
        self.Z = Z
        self.N = N
        self.iteration = iteration
        super().__init__(
            f"no bound state for Z={Z:g}, N={N:g} (iteration {iteration}); "
            f"mass exceeds binding capacity"
        )


class BracketFailed(IonlabError):
    """A shooting bracket does not contain a sign change."""


class OptimizerStalled(IonlabError):
    """A variational search made no progress within its budget."""


class CoincidentPoints(IonlabError):
    """A point configuration contains two coincident points."""


class OutOfRange(IonlabError):
    """A parameter lies outside the validity range of a formula."""
