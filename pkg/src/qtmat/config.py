"""Truncation and stopping tolerances shared by all algebra operations."""

from dataclasses import dataclass, replace


@dataclass(frozen=True)
class ToleranceConfig:
    """Knobs controlling truncation, compression and iteration stopping.

    tol_symbol        relative mass allowed to be dropped from symbol tails
    tol_corr          relative error allowed when compressing corrections
    tol_stop          stopping tolerance of iterative engines and certificates
    max_terms         cap on the number of series terms
    max_finite_section cap on dense finite-section sizes used internally
    max_levels        cap on node-doubling levels of the contour engine
    annulus_samples   unit-circle sample count for symbol range checks
    """

    tol_symbol: float = 1e-14
    tol_corr: float = 1e-14
    tol_stop: float = 1e-12
    max_terms: int = 512
    max_finite_section: int = 4096
    max_levels: int = 12
    annulus_samples: int = 256

    def __post_init__(self):
        for name in ("tol_symbol", "tol_corr", "tol_stop"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        for name in ("max_terms", "max_finite_section", "max_levels",
                     "annulus_samples"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be at least 1")

    def updated(self, **kwargs):
        """Return a copy with the given fields replaced."""
        return replace(self, **kwargs)


DEFAULT_CONFIG = ToleranceConfig()
