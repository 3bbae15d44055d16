"""Bundles, connections, holonomy and cohomology over finite posets.

The submodules follow the layers of the theory:

* :mod:`.poset` finite posets, down-sets and locally constant maps
* :mod:`.simplicial` simplices, nerve, paths, homotopy moves and pi_1
* :mod:`.groups` finite coefficient groups and homomorphism search
* :mod:`.bundles` net bundles, principal bundles, charts and sections
* :mod:`.cohomology` cochains, connections, curvature and holonomy
* :mod:`.cech` Čech and locally constant cocycles
"""

from .errors import (
    BudgetExceeded,
    ParseError,
    PosetBundleError,
    ValidationError,
)
from .poset import Poset, build_poset, down_set, dual, fundamental_covering, parse_poset
from .simplicial import Path, Simplex, face, pi1_presentation, reverse, simplices
from .groups import Group, Subgroup, cyclic, parse_group, product, symmetric
from .cohomology import (
    Cochain1,
    Morphism0,
    classify_cocycles,
    cochains_equivalent,
    curvature,
    holonomy,
    induced_cocycle,
    is_cocycle,
    is_connection_cochain,
    reconstruct_bundle,
)
from .cech import to_cech, to_net, verify_double_circle

__version__ = "0.1.0"

__all__ = [
    "BudgetExceeded",
    "ParseError",
    "PosetBundleError",
    "ValidationError",
    "Poset",
    "build_poset",
    "down_set",
    "dual",
    "fundamental_covering",
    "parse_poset",
    "Path",
    "Simplex",
    "face",
    "pi1_presentation",
    "reverse",
    "simplices",
    "Group",
    "Subgroup",
    "cyclic",
    "parse_group",
    "product",
    "symmetric",
    "Cochain1",
    "Morphism0",
    "classify_cocycles",
    "cochains_equivalent",
    "curvature",
    "holonomy",
    "induced_cocycle",
    "is_cocycle",
    "is_connection_cochain",
    "reconstruct_bundle",
    "to_cech",
    "to_net",
    "verify_double_circle",
]
