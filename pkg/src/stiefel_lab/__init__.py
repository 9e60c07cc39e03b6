"""stiefel-lab: exact quadratic-form machinery, Stiefel complexes, homology
certificates, and homological stability-range formulas.

Everything is exact arithmetic (prime fields, Q, Z_(p), truncated p-adics, Z);
there is no floating point in any computation path.
"""

from stiefel_lab.rings import (
    RingDescriptor,
    RingError,
    Scalar,
    finite_field,
    integers,
    localized_at,
    padic,
    rationals,
)

__all__ = [
    "RingDescriptor",
    "RingError",
    "Scalar",
    "finite_field",
    "integers",
    "localized_at",
    "padic",
    "rationals",
]

__version__ = "0.1.0"
