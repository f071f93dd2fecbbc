"""Exception hierarchy for the latcoset package."""


class LatcosetError(Exception):
    """Base class for all latcoset errors."""


class SingularMatrix(LatcosetError):
    """An integer matrix that must be nonsingular has determinant zero."""


class NotASublattice(LatcosetError):
    """A claimed sublattice has a generator outside the superlattice."""


class CapacityError(LatcosetError):
    """A lattice enumeration exceeded its configured point cap."""


class CodebookTooLarge(LatcosetError):
    """Exhaustive ML decoding was requested for a codebook above the guard size."""


class RankDeficientChannel(LatcosetError):
    """The effective channel matrix is (numerically) rank deficient."""


class NoFeasibleCandidate(LatcosetError):
    """A sublattice search finished its budget without a feasible candidate.

    Carries the best infeasible lattice and the search report so callers can
    still inspect what the budget bought.
    """

    def __init__(self, message, best=None, report=None):
        super().__init__(message)
        self.best = best
        self.report = report
