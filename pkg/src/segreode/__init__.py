"""Exact computer algebra for singular cubic ODEs with isolated
meromorphic singularities, their admissible Segre families, and the
nonminimal real hypersurfaces they define.

All computation is over the Gaussian rationals with explicit, carried
truncations; nothing here floats.
"""

from .backend import BACKEND_NAME
from .scalars import GaussRational, I, parse_gauss
from .series import TriSeries, ULaurent, USeries

__version__ = "0.1.0"

__all__ = [
    "BACKEND_NAME",
    "GaussRational",
    "I",
    "TriSeries",
    "ULaurent",
    "USeries",
    "parse_gauss",
    "__version__",
]
