"""Superoscillations, perturbed Bernstein operators and supershift checks in arbitrary precision."""

__version__ = "0.1.0"
TOOL_NAME = "supershift-lab"

from .errors import (  # noqa: E402
    AmbiguousError,
    DegenerateError,
    DomainError,
    GlueError,
    LabError,
    NonFiniteError,
    PrecisionError,
    SingularTimeError,
)
from .numkernel import AUTO, FunctionSpec, PrecisionPolicy  # noqa: E402
from .sampling import EpsilonSpec  # noqa: E402

__all__ = [
    "AUTO",
    "AmbiguousError",
    "DegenerateError",
    "DomainError",
    "EpsilonSpec",
    "FunctionSpec",
    "GlueError",
    "LabError",
    "NonFiniteError",
    "PrecisionError",
    "PrecisionPolicy",
    "SingularTimeError",
    "__version__",
]
