"""Exact calculus of singular Legendre map-germs.

Truncated polynomial jets over exact rationals, exterior calculus along
mappings, the standard contact chart with its Hamiltonian fields, integral
map-germs of corank at most one (open Whitney umbrellas and friends), the
module of infinitesimal integral deformations, and decidable jet-level
stability checks, all with zero floating point in the core.
"""

from .ring import TruncatedPoly, parse_expression
from .forms import Chart, DiffForm, FieldAlongMap, MapBetweenCharts, darboux_chart, source_chart
from .contact import ContactChart, contact_hamiltonian, hamiltonian_of, is_legendre_hamiltonian, reeb
from .integral_maps import (IntegralMap, IsotropicMap, check_integral,
                            complete_from_uv, lift_isotropic, owu_normal_form,
                            project_isotropic)
from .deformations import (DeformationField, module_mult, rf_truncated,
                           tf_apply, vi_basis, wf_apply)
from .stability import (StabilityReport, check_contact_stability,
                        check_fiber_generation, check_legendre_stability,
                        classify_umbrella, compute_conclusive_order,
                        extend_unfoldings)

__all__ = [
    "TruncatedPoly", "parse_expression",
    "Chart", "DiffForm", "FieldAlongMap", "MapBetweenCharts",
    "darboux_chart", "source_chart",
    "ContactChart", "contact_hamiltonian", "hamiltonian_of",
    "is_legendre_hamiltonian", "reeb",
    "IntegralMap", "IsotropicMap", "check_integral", "complete_from_uv",
    "lift_isotropic", "owu_normal_form", "project_isotropic",
    "DeformationField", "module_mult", "rf_truncated", "tf_apply",
    "vi_basis", "wf_apply",
    "StabilityReport", "check_contact_stability", "check_fiber_generation",
    "check_legendre_stability", "classify_umbrella",
    "compute_conclusive_order", "extend_unfoldings",
]

__version__ = "0.1.0"
