"""Parikh automata, constrained automata and bounded-language flattening."""

from .apa import AffineFn, DetAPA, affine_compose, apa_accepts, epsca_to_detapa, monoid_closure
from .automata import Automaton, Transition, is_deterministic, is_flat, subset_automaton
from .bsl import BslLanguage, Socle, bsl_member, canonical_epsca, pa_iteration_set, pa_socle_check
from .config import Limits, current_limits, limits
from .diophantine import solve_nonneg_system
from .errors import (
    ConstraintDeterminismUnverified,
    DimensionError,
    ModelFormatError,
    MonoidCapExceeded,
    NotBoundedError,
    ParikhKitError,
    SocleViolation,
    SolverCapExceeded,
    SupportEnumerationCapExceeded,
)
from .flatten import (
    Branch,
    Cqdd,
    FlatDetCA,
    NotBounded,
    Slre,
    bounded_pa_to_cqdd,
    bounded_socle_of_regular,
    branch_periods,
    common_root,
    cqdd_accepts,
    detapa_to_cqdd,
    flatten_branch,
    primitive_root,
    runs_slre,
)
from .models import CA, PA, EpsCA, ca_accepts, ca_to_pa, epsca_to_ca, pa_accepts, pa_empty, pa_to_ca
from .semilinear import (
    LinearSet,
    SemilinearSet,
    sl_enumerate,
    sl_intersect,
    sl_linear_image,
    sl_linear_preimage,
    sl_member,
    sl_union,
)

__version__ = "0.1.0"

__all__ = [
    "AffineFn",
    "DetAPA",
    "affine_compose",
    "apa_accepts",
    "epsca_to_detapa",
    "monoid_closure",
    "Automaton",
    "Transition",
    "is_deterministic",
    "is_flat",
    "subset_automaton",
    "BslLanguage",
    "Socle",
    "bsl_member",
    "canonical_epsca",
    "pa_iteration_set",
    "pa_socle_check",
    "Limits",
    "current_limits",
    "limits",
    "solve_nonneg_system",
    "ConstraintDeterminismUnverified",
    "DimensionError",
    "ModelFormatError",
    "MonoidCapExceeded",
    "NotBoundedError",
    "ParikhKitError",
    "SocleViolation",
    "SolverCapExceeded",
    "SupportEnumerationCapExceeded",
    "Branch",
    "Cqdd",
    "FlatDetCA",
    "NotBounded",
    "Slre",
    "bounded_pa_to_cqdd",
    "bounded_socle_of_regular",
    "branch_periods",
    "common_root",
    "cqdd_accepts",
    "detapa_to_cqdd",
    "flatten_branch",
    "primitive_root",
    "runs_slre",
    "CA",
    "PA",
    "EpsCA",
    "ca_accepts",
    "ca_to_pa",
    "epsca_to_ca",
    "pa_accepts",
    "pa_empty",
    "pa_to_ca",
    "LinearSet",
    "SemilinearSet",
    "sl_enumerate",
    "sl_intersect",
    "sl_linear_image",
    "sl_linear_preimage",
    "sl_member",
    "sl_union",
]
