"""Mal'cev conditions from labeled graphs, and tools to check them on finite algebras."""

from ._accel import backend_name
from .algebra import (
    AlgebraError,
    CapExceeded,
    FiniteAlgebra,
    FreeAlgebraPresentation,
    Operation,
    ToleranceRecord,
    builtin_algebra,
    chain,
    classify,
    compatible_reflexive_relations,
    congruences,
    direct_product,
    free_algebra,
    generated_congruence,
    is_compatible,
    set_algebra,
    subuniverse_closure,
    tolerances,
    z2,
)
from .connect import ConnectionInputError, check_inclusion, connect, relation, relation_mask
from .fixtures import builtin_graph
from .graphs import GraphError, LabeledGraph, LabelPartition, canonical_form, is_regular, k_constants, label_partition
from .malcev import Identity, IdentitySet, equivalent_mod_renaming, generate, holds_in_algebra
from .relations import FinRelation, UniverseMismatch, circ_m, converse
from .terms import Compose, Intersect, TermSyntaxError, Var, eval_term, parse_term, print_term, term_to_graph
from .verify import (
    VerificationReport,
    check_contolnuo,
    check_contolnuok,
    check_cornuo,
    check_wp,
    extract_malcev_terms,
    realizing_term,
    term_realizability,
    variety_satisfies_congruence_inclusion,
)

__version__ = "0.1.0"
