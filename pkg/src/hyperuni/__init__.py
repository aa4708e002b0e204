"""Conformal uniformization of Gromov hyperbolic graphs by Busemann densities."""

from .busemann import BoundaryRay, BusemannField, busemann_field
from .generators import GeneratorSpec, generate
from .hyperbolicity import delta_four_point
from .space import FiniteMetricSpace, PathArc, build_space
from .uniformize import ConformalDeformation, constants_ledger
from .verify import SuiteConfig, VerificationReport, run_suite

__version__ = "0.1.0"

__all__ = [
    "BoundaryRay",
    "BusemannField",
    "ConformalDeformation",
    "FiniteMetricSpace",
    "GeneratorSpec",
    "PathArc",
    "SuiteConfig",
    "VerificationReport",
    "build_space",
    "busemann_field",
    "constants_ledger",
    "delta_four_point",
    "generate",
    "run_suite",
]
