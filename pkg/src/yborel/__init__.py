"""y-Borel transform laboratory for the Riemann Xi function.

Certified arithmetic (balls over mpmath), truncated bivariate power series
and the y-Borel transform, high-precision Xi Maclaurin coefficients with
Turan-ratio reports, zero power series of transformed polynomials, Jensen
polynomial discriminant scans, and numerical root tracking across the
deformation parameter.
"""

__version__ = "0.1.0"

from .numerics import (  # noqa: F401
    DEFAULT_CONTEXT,
    DegenerateInput,
    ErrFloat,
    IsolationResult,
    NoConvergence,
    PrecisionContext,
    Sign,
    certified_eval,
    isolate_real_roots,
    lacunary_half_sum,
    solve_rho,
)
