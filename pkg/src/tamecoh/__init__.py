"""Exact local cohomology of multigraded polynomial rings and of the
bigraded section rings in the example families."""

from .cech import (
    FreeComplex,
    PolyMap,
    cech_oracle,
    chain_homology,
    complex_hp_homology,
    dual_map,
    hp_basis,
    hp_matrix,
    hq_basis,
    hq_matrix,
    multiplication_map,
    pairing_check,
    taylor_complex,
    verify_complex_duality,
)
from .families import (
    FamilySpec,
    asymptotic_bracket,
    closed_form,
    duality_series_check,
    family_dim,
    gcm_witness,
    omega_dim,
    rees_table,
    series,
    tameness_classify,
)
from .grading import GradingSpec, InputError, NotSharpError, fiber_enumerate, is_sharp

__version__ = "0.1.0"
