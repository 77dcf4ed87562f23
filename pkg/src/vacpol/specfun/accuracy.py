from dataclasses import dataclass, replace

from ..errors import DomainError


@dataclass(frozen=True)
class AccuracyControl:
    """Tolerance and truncation limits shared by series and quadrature code.

    Parameters
    ----------
    rel_tol : float
        Target relative accuracy, in ``(0, 1e-3]``.
    max_terms : int
        Cap on the number of terms summed by any series (at least 10).
    max_subdivisions : int
        Cap on adaptive quadrature interval bisections (at least 100).
    """

    rel_tol: float = 1e-12
    max_terms: int = 200
    max_subdivisions: int = 10_000

    def __post_init__(self):
        if not (0.0 < self.rel_tol <= 1e-3):
            raise DomainError(f"rel_tol must lie in (0, 1e-3], got {self.rel_tol!r}")
        if self.max_terms < 10:
            raise DomainError(f"max_terms must be >= 10, got {self.max_terms!r}")
        if self.max_subdivisions < 100:
            raise DomainError(
                f"max_subdivisions must be >= 100, got {self.max_subdivisions!r}")

    def scaled(self, factor):
        """Copy with ``rel_tol`` multiplied by `factor` (clipped to 1e-3)."""
        return replace(self, rel_tol=min(self.rel_tol * factor, 1e-3))


DEFAULT_ACCURACY = AccuracyControl()
