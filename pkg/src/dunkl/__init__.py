"""Computational rational Dunkl theory: reflection groups, Dunkl operators,
the intertwining operator, Dunkl kernel and transform, generalized Hermite
systems and the Dunkl heat kernel."""

from .errors import (ConfigurationError, DunklError, PreconditionError, QuadratureError,
                     RegularityError, ResourceError, TruncationError)
from .polynomial import MultiPoly, parse_poly
from .roots import (GroupElement, MultiplicityFunction, Root, RootSystem, RootSystemContext,
                    build_standard, from_descriptor, generate_group, rank_one, reflect,
                    weight_w_k)
from .scalars import Q

__version__ = "0.1.0"

__all__ = [
    "ConfigurationError", "DunklError", "PreconditionError", "QuadratureError", "RegularityError",
    "ResourceError", "TruncationError", "MultiPoly", "parse_poly", "GroupElement",
    "MultiplicityFunction", "Root", "RootSystem", "RootSystemContext", "build_standard",
    "from_descriptor", "generate_group", "rank_one", "reflect", "weight_w_k", "Q",
]
