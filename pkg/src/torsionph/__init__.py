"""Exact persistent homology with integer coefficients.

Computes persistent homology groups of filtered simplicial complexes over
Z, Q or GF(p), and compares them with the torsion-aware pseudo-distance
``d_T`` and with the bottleneck (matching) distance between diagrams.
"""

from .abelian import (
    FgAbelianGroup,
    IntMatrix,
    cokernel,
    direct_sum,
    is_subquotient,
    is_trivial,
    oracle_is_subquotient_finite,
    primary_view,
    smith_normal_form,
)
from .complex import (
    FilteredComplex,
    Simplex,
    build_diagram_realization,
    build_rp2,
    build_s2,
    critical_values,
    lower_star,
    perturb,
    sublevel,
    validate,
)
from .distances import (
    d_match,
    d_T,
    delta_lower_bound_witness,
    dt_predicate,
    stability_check,
)
from .errors import TorsionPHError
from .kernels import backend
from .persistence import (
    INTEGERS,
    RATIONALS,
    PersistenceDiagram,
    PersistenceModule,
    PrimeField,
    diagram,
    module_on_grid,
    persistent_betti,
    persistent_group,
)

__version__ = "0.1.0"
