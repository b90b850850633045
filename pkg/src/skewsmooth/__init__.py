"""Exact PBW and differential-smoothness checks for three-generator
skew polynomial rings, with a preset catalogue and a CLI."""

from .coeffs import (
    DenominatorVanishes,
    DivisionByZero,
    MultiPoly,
    Param,
    RationalFn,
    param,
    rf,
)
from .ncalg import (
    AlgebraSpec,
    Endo,
    FIELD_NAMES,
    InvalidSpec,
    NCMonomial,
    NCPoly,
    apply_endo,
    compose_endos,
    make_spec,
    nc_mul,
    nc_pow,
    reduce_word,
    validate_spec,
)
from .pbw import DiamondReport, closed_form_coefficients, diamond_check, is_pbw, pbw_conditions
from .calculus import (
    GradedForm,
    IntegralData,
    TwistTriple,
    basis_form,
    build_automorphisms,
    connectedness_check,
    d_closed,
    d_leibniz,
    d_on_forms,
    integrability_check,
    integral_data,
    left_act,
    nu_omega,
    pi_omega,
    wedge,
    zero_form,
)
from .smooth import (
    Preset,
    SmoothnessKind,
    SmoothnessVerdict,
    UnknownPreset,
    classify,
    preset,
    preset_ids,
    presets,
    smoothness_conditions,
    smoothness_obstruction,
    table1,
    verify_construction,
)

__version__ = "0.1.0"
