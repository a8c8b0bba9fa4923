"""Centralized numerical tolerances."""
from dataclasses import dataclass


@dataclass(frozen=True)
class NumericPolicy:
    #: Hermiticity / orthonormality / real-part checks.
    structural: float = 1e-12
    #: Slack for eigenvalues that should be >= 0; values in [-psd, 0) are clamped.
    psd: float = 1e-10
    #: Unit-trace and trace-preservation checks on in-memory objects.
    trace: float = 1e-10
    #: Trace-preservation and identity-at-zero checks on file input.
    file_tp: float = 1e-8
    #: Largest condition number accepted when inverting T(E_{t,0}).
    max_condition: float = 1e12
    #: Eigenvalues of rho2 below this count as outside its support.
    support: float = 1e-12
    #: Overlap of rho1 with that kernel above which S(rho1||rho2) = inf.
    overlap: float = 1e-10


DEFAULT_POLICY = NumericPolicy()
