"""
Diagnostics Module

Result types shared across packages: a boolean validation outcome that carries
the details of the worst violation found, and the report of one inequality
trial with its JSON and CSV forms.
"""

from dataclasses import dataclass, field

CSV_COLUMNS = ('name', 'lhs', 'rhs', 'slack', 'passed', 'tol', 'fingerprint')


@dataclass(frozen=True)
class ValidationResult:
    """Outcome of a validation routine."""

    ok: bool
    diagnostics: dict = field(default_factory=dict)

    def __bool__(self):
        return self.ok

    def to_dict(self):
        """Convert the result to a dictionary representation."""
        return {'ok': self.ok, 'diagnostics': dict(self.diagnostics)}


@dataclass(frozen=True)
class CheckReport:
    """Outcome of one inequality trial."""

    name: str
    lhs: float
    rhs: float
    slack: float
    passed: bool
    tol: float
    fingerprint: str
    extras: dict = field(default_factory=dict, compare=False)

    @classmethod
    def from_sides(cls, name, lhs, rhs, tol, fingerprint='', extras=None):
        """
        Build a report from the two sides of an inequality lhs <= rhs.

        Args:
            name (str): Check name
            lhs (float): Left-hand side
            rhs (float): Right-hand side
            tol (float): Accepted violation
            fingerprint (str): Instance fingerprint for replay
            extras (dict): Additional per-trial measurements

        Returns:
            CheckReport: The report, passed iff rhs - lhs >= -tol
        """
        lhs = float(lhs)
        rhs = float(rhs)
        slack = rhs - lhs
        return cls(name, lhs, rhs, slack, bool(slack >= -tol), float(tol), fingerprint, dict(extras or {}))

    def to_dict(self):
        data = {
            'name': self.name,
            'lhs': self.lhs,
            'rhs': self.rhs,
            'slack': self.slack,
            'passed': self.passed,
            'tol': self.tol,
            'fingerprint': self.fingerprint,
        }
        if self.extras:
            data['extras'] = dict(self.extras)
        return data

    def csv_row(self):
        """Row in the order of CSV_COLUMNS with floats at 17 significant digits."""
        return [
            self.name,
            f"{self.lhs:.17g}",
            f"{self.rhs:.17g}",
            f"{self.slack:.17g}",
            'true' if self.passed else 'false',
            f"{self.tol:.17g}",
            self.fingerprint,
        ]
