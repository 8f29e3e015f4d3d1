"""Exact combinatorics of simplicial objects in finite sets.

Finite sets and spans, maps with linearly ordered fibers, finite posets
and categories with their twisted arrows, truncated simplicial sets, the
spine/long-edge gluing spans they generate, checkers for the
two-dimensional Segal conditions, and the exact-rational incidence
convolution algebra living on the edges of such an object.
"""

__version__ = "0.1.0"

from .errors import (
    CoherenceError,
    InputError,
    InternalError,
    ResourceError,
    SegalForgeError,
    TruncationError,
    ValidationError,
)

__all__ = [
    "CoherenceError",
    "InputError",
    "InternalError",
    "ResourceError",
    "SegalForgeError",
    "TruncationError",
    "ValidationError",
    "__version__",
]
