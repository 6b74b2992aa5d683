"""Exact lattice algebra for stacky fans, Gale duality and automorphism 2-groups."""

from .abelian import FgAbelianGroup, GroupHom, cokernel, dual_finite, homology_at, kernel
from .fans import Fan, find_fan_isomorphisms, is_complete, primitive_collections, validate_fan
from .gale import BetaMap, GaleDualData, gale_dual, mu_of, verify_sequences
from .lattice import det, hnf, kernel_basis, smith_invariants, snf, solve_integer
from .stacky import StackyFan, find_symmetries, quotient_presentation, theorem_shadow, validate_stacky_fan
from .twogroups import (
    Arrow,
    CrossedModuleMorphism,
    FiniteCrossedModule,
    FiniteGroup,
    compose_arrows,
    is_equivalence,
    multiply_arrows,
    pgl_presentation,
    pi1,
    pi2,
    verify_crossed_module,
)
from .weighted import build_fan, build_stacky_fan, r_gerbe_stacky_fan, reduce, verify_prop_4_4, weighted_pgl

__version__ = "0.1.0"

__all__ = [
    "Arrow",
    "BetaMap",
    "build_fan",
    "build_stacky_fan",
    "cokernel",
    "compose_arrows",
    "CrossedModuleMorphism",
    "det",
    "dual_finite",
    "Fan",
    "FgAbelianGroup",
    "find_fan_isomorphisms",
    "find_symmetries",
    "FiniteCrossedModule",
    "FiniteGroup",
    "gale_dual",
    "GaleDualData",
    "GroupHom",
    "hnf",
    "homology_at",
    "is_complete",
    "is_equivalence",
    "kernel",
    "kernel_basis",
    "mu_of",
    "multiply_arrows",
    "pgl_presentation",
    "pi1",
    "pi2",
    "primitive_collections",
    "quotient_presentation",
    "r_gerbe_stacky_fan",
    "reduce",
    "smith_invariants",
    "snf",
    "solve_integer",
    "StackyFan",
    "theorem_shadow",
    "validate_fan",
    "validate_stacky_fan",
    "verify_crossed_module",
    "verify_prop_4_4",
    "verify_sequences",
    "weighted_pgl",
]
