"""Exact verification of A-quasiaffinity for polynomial integrands."""

from .algebra import RatMatrix, SparsePoly, nullspace, poly_diff, poly_eval, rank
from .integrands import (
    DerivativeTensor,
    PolyIntegrand,
    apply_tensor,
    derivative_tensor,
    homogeneous_parts,
    zoo_integrand,
)
from .kernels import BACKEND
from .operators import (
    FrequencySample,
    HomOperator,
    SampleGrid,
    adjoint,
    block_diag,
    constant_rank_probe,
    default_grid,
    image_sample,
    kernel_sample,
    pair_operator,
    spanning_probe,
    symbol_at,
    verify_potential_pair,
    zoo_operator,
)
from .quasiaffinity import (
    CheckConfig,
    QuadBasis,
    lambda_affine_check,
    quadratic_vanishing_basis,
    quasiaffine_check,
    quasiaffine_necessary_from_a,
)
from .reports import CheckReport, Verdict, Witness
from .torus import TrigField, TrigPoly, apply_symbol, compose_integrand, torus_average

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "CheckConfig", "CheckReport", "DerivativeTensor", "FrequencySample", "HomOperator",
    "PolyIntegrand", "QuadBasis", "RatMatrix", "SampleGrid", "SparsePoly", "TrigField", "TrigPoly",
    "Verdict", "Witness", "adjoint", "apply_symbol", "apply_tensor", "block_diag", "compose_integrand",
    "constant_rank_probe", "default_grid", "derivative_tensor", "homogeneous_parts", "image_sample",
    "kernel_sample", "lambda_affine_check", "nullspace", "pair_operator", "poly_diff", "poly_eval",
    "quadratic_vanishing_basis", "quasiaffine_check", "quasiaffine_necessary_from_a", "rank",
    "spanning_probe", "symbol_at", "torus_average", "verify_potential_pair", "zoo_integrand",
    "zoo_operator",
]
