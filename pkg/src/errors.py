"""
Error Types Module

This module defines the exception hierarchy shared by every package of the
CAT(kappa) lab. All domain failures derive from LabError so that the command
line front end can map them onto exit codes in one place.
"""


class LabError(Exception):
    """Base class for all lab errors."""


class InfeasibleError(LabError):
    """Requested object does not exist (comparison triangle, ball sample)."""


class UndefinedAngleError(LabError):
    """Angle requested at a degenerate side or between coincident points."""


class IncompatibleSpaceError(LabError):
    """Points or measures belong to different geodesic spaces."""


class NonUniqueGeodesicError(LabError):
    """Endpoints are antipodal, so no unique geodesic joins them."""


class RegimeError(LabError):
    """Input lies outside the diameter or ball regime of a statement."""


class InvalidInstanceError(LabError):
    """A generated or loaded instance violates its defining invariant."""


class UnregisteredFunctionError(LabError):
    """Jensen test function that is not in the registered convex family."""


class CurvatureError(LabError, ValueError):
    """Formula evaluated with a curvature outside its domain."""


class UnsupportedSetError(LabError, NotImplementedError):
    """Convex set kind without a projection routine."""


class SolverError(LabError):
    """Numerical solver failed to converge or to certify its output."""

    def __init__(self, message, diagnostics=None):
        """
        Initialize the solver error.

        Args:
            message (str): Human readable description
            diagnostics (dict): Solver state at the time of failure
        """
        super().__init__(message)
        self.diagnostics = dict(diagnostics or {})

    def __str__(self):
        base = super().__str__()
        if not self.diagnostics:
            return base
        details = ', '.join(f"{key}={value}" for key, value in sorted(self.diagnostics.items()))
        return f"{base} ({details})"


class SweepError(LabError):
    """A trial of a verification sweep raised instead of reporting."""

    def __init__(self, fingerprint, cause):
        """
        Initialize the sweep error.

        Args:
            fingerprint (str): Fingerprint of the failing trial
            cause (Exception): Original exception
        """
        super().__init__(f"trial {fingerprint} raised {type(cause).__name__}: {cause}")
        self.fingerprint = fingerprint
        self.cause = cause
