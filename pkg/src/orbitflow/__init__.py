"""Total positivity on adjoint orbits of the unitary group.

Submodules:
    linalg     minors, Iwasawa (QR) factors, exponentials, eigensolvers
    positivity certification of totally positive / nonnegative objects
    flagorbit  flags, Plucker coordinates, twist maps, cells, orbit dictionary
    jacobi     Vandermonde flags and Jacobi-matrix reconstructions
    flows      gradient flows in the Kahler / normal / induced metrics
    toda       the symmetric Toda flow
    ampli      amplituhedron projections
    cli        command-line interface
"""

from . import ampli, flagorbit, flows, io, jacobi, linalg, perms, positivity, toda
from .errors import CertificationError, DomainError, DriftError, LinalgError

__all__ = [
    "ampli", "flagorbit", "flows", "io", "jacobi", "linalg", "perms",
    "positivity", "toda",
    "CertificationError", "DomainError", "DriftError", "LinalgError",
]

__version__ = "0.1.0"
