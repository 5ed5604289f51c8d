"""Characterise knowledge graphs as formal contexts and concept lattices.

The package models what a knowledge graph says (properties) and what it lets
users do (affordances) as binary incidence tables, derives the complete
concept lattice and implication basis of each table, and answers fitness,
gap, and migration questions against community requirements. A case-study
corpus of ten public knowledge graphs ships embedded, together with golden
results for self-verification.
"""

from .context import (
    PER_DIMENSION,
    Dimension,
    FeatureRegistry,
    Finding,
    FormalContext,
    RegistryEntry,
    RetroCheckReport,
    ValidationReport,
    attribute_frequency,
    merge_contexts,
    normalize_name,
    parse_cxt,
    parse_json_context,
    register_feature,
    registry_from_contexts,
    serialize_cxt,
    serialize_json_context,
    singleton_features,
    universal_features,
    validate_context,
)
from .corpus import KG_NAMES, ProvenanceCorpus, load_corpus, verify_corpus
from .errors import ContinuumError, InputError, IntegrityError
from .fca import (
    ConceptLattice,
    FormalConcept,
    Implication,
    build_lattice,
    close_attributes,
    close_under_implications,
    derive_attributes,
    derive_objects,
    enumerate_concepts,
    follows_from,
    implication_basis,
    implication_holds,
    join,
    lattice_json,
    meet,
    next_closure,
)
from .profiles import (
    CostModel,
    FeatureDelta,
    FitnessReport,
    KgProfile,
    RequirementSet,
    common_position,
    cost_model_from_json,
    delta_json,
    evaluate_fitness,
    fitness_json,
    gap_cost,
    object_concept,
    profile_of,
    requirement_from_json,
    transformation_delta,
)
from .render import EMPTY_MARK, Legend, LegendRow, LayerAssignment, assign_layers, legend, to_dot

__all__ = [
    "PER_DIMENSION",
    "Dimension",
    "FeatureRegistry",
    "Finding",
    "FormalContext",
    "RegistryEntry",
    "RetroCheckReport",
    "ValidationReport",
    "attribute_frequency",
    "merge_contexts",
    "normalize_name",
    "parse_cxt",
    "parse_json_context",
    "register_feature",
    "registry_from_contexts",
    "serialize_cxt",
    "serialize_json_context",
    "singleton_features",
    "universal_features",
    "validate_context",
    "KG_NAMES",
    "ProvenanceCorpus",
    "load_corpus",
    "verify_corpus",
    "ContinuumError",
    "InputError",
    "IntegrityError",
    "ConceptLattice",
    "FormalConcept",
    "Implication",
    "build_lattice",
    "close_attributes",
    "close_under_implications",
    "derive_attributes",
    "derive_objects",
    "enumerate_concepts",
    "follows_from",
    "implication_basis",
    "implication_holds",
    "join",
    "lattice_json",
    "meet",
    "next_closure",
    "CostModel",
    "FeatureDelta",
    "FitnessReport",
    "KgProfile",
    "RequirementSet",
    "common_position",
    "cost_model_from_json",
    "delta_json",
    "evaluate_fitness",
    "fitness_json",
    "gap_cost",
    "object_concept",
    "profile_of",
    "requirement_from_json",
    "transformation_delta",
    "EMPTY_MARK",
    "Legend",
    "LegendRow",
    "LayerAssignment",
    "assign_layers",
    "legend",
    "to_dot",
]
