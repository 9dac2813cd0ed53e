"""Exact computations with twisted-conjugation invariants, excursion operators
and semisimplifications of matrix representations."""

__version__ = "0.1.0"

from .lattice import (
    GL,
    SL,
    LatticeMap,
    Product,
    RootDatum,
    Torus,
    cokernel_invariant_factors,
    dominant_representative,
    fixed_sublattice,
    hermite_normal_form,
    smith_normal_form,
)
from .repring import (
    Character,
    RepRingElement,
    decompose_character,
    exterior_power_character,
    inverse_newton_transform,
    multiply_characters,
    newton_transform,
    weyl_character,
)
from .tensorword import Det, Dual, Exterior, Irrep, Std, Sum, Tensor, TensorWord
from .twisted import (
    GroupAutomorphism,
    automorphism,
    equivariance_intertwiner,
    fixed_dominant_weights,
    levi_finiteness_check,
    normalize_automorphism,
    torus_twisted_basis,
    twisted_trace,
    valuation_certificate,
)
from .groups import FPGroup, RepresentationPoint, Word, check_representation, free_abelian_group, free_group
from .excursion import (
    ExcursionDatum,
    TraceFunction,
    excursion_value,
    hecke_value,
    invariant_tensors,
    span_fit,
    span_fit_many,
    trace_datum,
)
from .semisimplify import (
    EigenvalueRecord,
    MatrixAlgebra,
    commutant,
    enveloping_algebra,
    frobenius_intertwiners,
    radical,
    same_component,
    semisimplification,
    weight_partition,
)
