"""Initial algebras of polynomial functors on finite sets, and Datalog least models."""

from .chain import (
    Chain,
    ChainResult,
    analyze,
    build_chain,
    detect_convergence,
    extract_initial_algebra,
    fold_via_chain,
    morphism_to_fixed_point,
    unique_hom_check,
)
from .datalog import least_model, parse_program, semi_naive, tp_step
from .finset import FinFn, FinSet, Iso, compose, elem, identity_fn, inverse, is_bijection
from .functor import Algebra, apply_mor, apply_obj, check_functor_laws, parse_functor_file
from .lattice import MonotoneOp, PowersetLattice, check_least, check_monotone, kleene_lfp
from .terms import cata, enumerate_terms, lambek_verify

__version__ = "0.1.0"
