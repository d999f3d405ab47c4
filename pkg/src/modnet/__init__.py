"""Finite-dimensional modular theory of standard subspaces and Poincare wedge nets."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    ClosureError,
    ExcludedOrbitError,
    GroupElementError,
    ModnetError,
    NotHermitianError,
    NotInvolutionError,
    NotPositiveError,
    NotStandardError,
    NotUnitaryError,
)
from .linalg import Antilinear, hermitian_function, nullspace, polar_antilinear  # noqa: E402
from .subspace import (  # noqa: E402
    RealSubspace,
    StandardSubspace,
    make_standard,
    modular_flow,
    subspace_from_involution,
    symplectic_complement,
    takesaki_test,
    transport,
)
