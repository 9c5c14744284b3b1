"""Deterministic identity testing and reconstruction for sums of powers of sparse polynomials over F_p."""
from .circuit_io import (
    CircuitDoc,
    OracleHandle,
    circuit_oracle,
    evaluate_circuit,
    format_poly,
    interpolate_dense,
    make_doc,
    parse_circuit,
    serialize_circuit,
)
from .circuits import PowCircuitMulti, PowCircuitUni, PowerTermUni
from .diffop import (
    DiffOperator,
    KernelBasis,
    apply_operator,
    kernel_basis,
    solve_annihilator,
    subspace_with_factor,
    wronskian,
)
from .errors import (
    PowCircError,
    ParameterError,
    DomainError,
    NotFoundError,
    FieldMismatchError,
    UnsupportedParametersError,
    RegimeError,
    UnsupportedFieldError,
    InfeasibleError,
    InconsistentInputError,
    DecodeFailure,
    NotInClassError,
    InternalInvariantError,
    AlignmentError,
    ReconstructionFailure,
    CircuitFormatError,
)
from .factor import Factorization, factor_univariate, irreducible_factors, squarefree_decomposition
from .field import FpElem, PrimeField, element_order, find_high_order_element, is_prime, next_prime
from .hitting import HittingSetSpec, NonZero, Zero, build_hitting_set, pit_test
from .ks import RobustSet, build_robust_set, parse_robust_set, psi_apply, psi_image, robust_decode
from .poly import (
    SparsePoly,
    UniPoly,
    derivative,
    gcd_monic,
    interpolate_univariate,
    ord_factor,
    perfect_dth_root,
    restrict_to_line,
)
from .reconstruct import (
    FAST,
    THEOREM,
    brute_force_recover,
    dfs_recover,
    reconstruct_multivariate,
    reconstruct_univariate,
)

__version__ = "0.1.0"

__all__ = [
    "AlignmentError",
    "CircuitDoc",
    "CircuitFormatError",
    "DecodeFailure",
    "DiffOperator",
    "DomainError",
    "FAST",
    "Factorization",
    "FieldMismatchError",
    "FpElem",
    "HittingSetSpec",
    "InconsistentInputError",
    "InfeasibleError",
    "InternalInvariantError",
    "KernelBasis",
    "NonZero",
    "NotFoundError",
    "NotInClassError",
    "OracleHandle",
    "ParameterError",
    "PowCircError",
    "PowCircuitMulti",
    "PowCircuitUni",
    "PowerTermUni",
    "PrimeField",
    "ReconstructionFailure",
    "RegimeError",
    "RobustSet",
    "SparsePoly",
    "THEOREM",
    "UniPoly",
    "UnsupportedFieldError",
    "UnsupportedParametersError",
    "Zero",
    "apply_operator",
    "brute_force_recover",
    "build_hitting_set",
    "build_robust_set",
    "circuit_oracle",
    "derivative",
    "dfs_recover",
    "element_order",
    "evaluate_circuit",
    "format_poly",
    "factor_univariate",
    "find_high_order_element",
    "gcd_monic",
    "interpolate_dense",
    "interpolate_univariate",
    "irreducible_factors",
    "is_prime",
    "kernel_basis",
    "make_doc",
    "next_prime",
    "ord_factor",
    "parse_circuit",
    "parse_robust_set",
    "perfect_dth_root",
    "pit_test",
    "psi_apply",
    "psi_image",
    "reconstruct_multivariate",
    "reconstruct_univariate",
    "restrict_to_line",
    "robust_decode",
    "serialize_circuit",
    "solve_annihilator",
    "squarefree_decomposition",
    "subspace_with_factor",
    "wronskian",
]
