"""KG feature profiles, requirement fitness, gap costs, and transformation deltas."""

from __future__ import annotations

import json
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from types import MappingProxyType

from .context import Dimension, FeatureRegistry, FormalContext, normalize_name
from .errors import InputError
from .fca import ConceptLattice, derive_attributes, derive_objects

_DIMENSION_ORDER = {d: i for i, d in enumerate(Dimension)}


def _freeze(features: Mapping[Dimension, Iterable[str]]) -> Mapping[Dimension, frozenset[str]]:
    frozen = {
        d: frozenset(normalize_name(f) for f in fs)
        for d, fs in sorted(features.items(), key=lambda kv: _DIMENSION_ORDER[kv[0]])
    }
    return MappingProxyType(frozen)


@dataclass(frozen=True)
class KgProfile:
    """Feature sets one knowledge graph exhibits, keyed by dimension."""

    kg: str
    features: Mapping[Dimension, frozenset[str]]

    def __post_init__(self) -> None:
        object.__setattr__(self, "kg", normalize_name(self.kg))
        object.__setattr__(self, "features", _freeze(self.features))


@dataclass(frozen=True)
class RequirementSet:
    """Features a community needs for a task, keyed by dimension."""

    community: str
    task: str
    required: Mapping[Dimension, frozenset[str]]

    def __post_init__(self) -> None:
        object.__setattr__(self, "required", _freeze(self.required))


@dataclass(frozen=True)
class FitnessReport:
    """Per-dimension split of required versus exhibited features.

    fit is true exactly when every gap set is empty; an empty requirement is
    trivially fit.
    """

    satisfied: Mapping[Dimension, frozenset[str]]
    gap: Mapping[Dimension, frozenset[str]]
    surplus: Mapping[Dimension, frozenset[str]]
    fit: bool


@dataclass(frozen=True)
class FeatureDelta:
    add: frozenset[str]
    remove: frozenset[str]


@dataclass(frozen=True)
class CostModel:
    """Weights for feature additions and removals; overrides are per feature name."""

    add_weight: float = 1.0
    remove_weight: float = 0.0
    overrides: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        weights = {normalize_name(k): float(v) for k, v in self.overrides.items()}
        if self.add_weight < 0 or self.remove_weight < 0 or any(w < 0 for w in weights.values()):
            raise InputError("invalid-weight", "cost weights must be non-negative")
        object.__setattr__(self, "overrides", MappingProxyType(weights))

    def add_cost(self, feature: str) -> float:
        return self.overrides.get(feature, self.add_weight)

    def remove_cost(self, feature: str) -> float:
        return self.overrides.get(feature, self.remove_weight)


def profile_of(contexts: Iterable[FormalContext], kg: str) -> KgProfile:
    """Collect one KG's features from per-dimension contexts."""
    kg = normalize_name(kg)
    features: dict[Dimension, set[str]] = {}
    seen = False
    for ctx in contexts:
        seen = True
        features.setdefault(ctx.dimension, set()).update(ctx.features_of(kg))
    if not seen:
        raise InputError("missing-input", "no contexts supplied")
    return KgProfile(kg, {d: frozenset(s) for d, s in features.items()})


def _check_registered(role: str, features: Mapping[Dimension, frozenset[str]], registry: FeatureRegistry) -> None:
    for dim, feats in features.items():
        for f in sorted(feats):
            entry = registry.get(f)
            if entry is None or entry.dimension is not dim:
                raise InputError(
                    "unknown-feature",
                    f"{role} feature {f!r} is not registered under {dim.value}",
                    location=f,
                )


def evaluate_fitness(
    profile: KgProfile,
    requirement: RequirementSet,
    registry: FeatureRegistry | None = None,
) -> FitnessReport:
    """Split each dimension's required features into satisfied and gap sets.

    When a registry is supplied, every profile and requirement feature must
    be registered under the dimension it is used in.
    """
    if registry is not None:
        _check_registered("profile", profile.features, registry)
        _check_registered("requirement", requirement.required, registry)
    dims = set(profile.features) | set(requirement.required)
    satisfied: dict[Dimension, frozenset[str]] = {}
    gap: dict[Dimension, frozenset[str]] = {}
    surplus: dict[Dimension, frozenset[str]] = {}
    for dim in sorted(dims, key=_DIMENSION_ORDER.get):
        required = requirement.required.get(dim, frozenset())
        exhibited = profile.features.get(dim, frozenset())
        satisfied[dim] = required & exhibited
        gap[dim] = required - exhibited
        surplus[dim] = exhibited - required
    fit = all(not g for g in gap.values())
    return FitnessReport(MappingProxyType(satisfied), MappingProxyType(gap), MappingProxyType(surplus), fit)


def gap_cost(report: FitnessReport, model: CostModel | None = None) -> float:
    """Weighted size of the gap plus weighted size of the surplus.

    The default model charges 1 per missing feature and nothing for surplus,
    so the cost of a fit KG is 0.
    """
    model = model or CostModel()
    total = 0.0
    for feats in report.gap.values():
        total += sum(model.add_cost(f) for f in feats)
    for feats in report.surplus.values():
        total += sum(model.remove_cost(f) for f in feats)
    return total


def object_concept(lattice: ConceptLattice, kg: str) -> int:
    """Index of the most specific concept whose extent contains the KG."""
    ctx = lattice.context
    extent = derive_objects(ctx, derive_attributes(ctx, [normalize_name(kg)]))
    return lattice.index_of_extent(extent)


def common_position(lattice: ConceptLattice, kgs: Iterable[str]) -> int:
    """Index of the most specific concept whose extent contains all given KGs.

    Its intent is exactly the feature set the KGs share.
    """
    ctx = lattice.context
    names = [normalize_name(k) for k in kgs]
    extent = derive_objects(ctx, derive_attributes(ctx, names))
    return lattice.index_of_extent(extent)


def transformation_delta(
    source: KgProfile,
    target: KgProfile | RequirementSet,
    registry: FeatureRegistry | None = None,
) -> Mapping[Dimension, FeatureDelta]:
    """Per-dimension feature additions and removals taking source to target.

    Against a RequirementSet only missing features count; nothing is removed.
    Against another profile the delta is an exact set difference both ways.
    """
    if registry is not None:
        _check_registered("source", source.features, registry)
        other = target.features if isinstance(target, KgProfile) else target.required
        _check_registered("target", other, registry)
    if isinstance(target, RequirementSet):
        wanted = target.required
        removing = False
    else:
        wanted = target.features
        removing = True
    dims = set(source.features) | set(wanted)
    out: dict[Dimension, FeatureDelta] = {}
    for dim in sorted(dims, key=_DIMENSION_ORDER.get):
        have = source.features.get(dim, frozenset())
        want = wanted.get(dim, frozenset())
        add = want - have
        remove = have - want if removing else frozenset()
        out[dim] = FeatureDelta(add, remove)
    return MappingProxyType(out)


# --- JSON codecs --------------------------------------------------------------


def requirement_from_json(text: str) -> RequirementSet:
    """Parse {"community", "task", "required": {"<dimension>": [...]}}."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError("invalid-json", str(exc)) from None
    if not isinstance(doc, dict):
        raise InputError("schema-violation", "top level must be an object")
    missing = {"community", "task", "required"} - doc.keys()
    if missing:
        raise InputError("schema-violation", f"missing keys: {', '.join(sorted(missing))}")
    community, task, required = doc["community"], doc["task"], doc["required"]
    if not isinstance(community, str) or not isinstance(task, str):
        raise InputError("schema-violation", "community and task must be strings")
    if not isinstance(required, dict):
        raise InputError("schema-violation", "required must map dimension tags to feature lists")
    by_dim: dict[Dimension, frozenset[str]] = {}
    for tag, feats in required.items():
        if not isinstance(feats, list) or not all(isinstance(f, str) for f in feats):
            raise InputError("schema-violation", f"required[{tag!r}] must be a list of strings")
        by_dim[Dimension.from_tag(tag)] = frozenset(feats)
    return RequirementSet(community, task, by_dim)


def cost_model_from_json(text: str) -> CostModel:
    """Parse {"add_weight"?, "remove_weight"?, "overrides"?}."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError("invalid-json", str(exc)) from None
    if not isinstance(doc, dict):
        raise InputError("schema-violation", "top level must be an object")
    extra = doc.keys() - {"add_weight", "remove_weight", "overrides"}
    if extra:
        raise InputError("schema-violation", f"unexpected keys: {', '.join(sorted(extra))}")
    add_weight = doc.get("add_weight", 1.0)
    remove_weight = doc.get("remove_weight", 0.0)
    overrides = doc.get("overrides", {})
    if not isinstance(add_weight, (int, float)) or not isinstance(remove_weight, (int, float)):
        raise InputError("schema-violation", "weights must be numbers")
    if not isinstance(overrides, dict) or not all(
        isinstance(k, str) and isinstance(v, (int, float)) for k, v in overrides.items()
    ):
        raise InputError("schema-violation", "overrides must map feature names to numbers")
    return CostModel(float(add_weight), float(remove_weight), overrides)


def _features_json(features: Mapping[Dimension, frozenset[str]]) -> dict[str, list[str]]:
    return {
        d.value: sorted(feats)
        for d, feats in sorted(features.items(), key=lambda kv: _DIMENSION_ORDER[kv[0]])
    }


def fitness_json(report: FitnessReport, *, kg: str, requirement: RequirementSet, cost: float | None = None) -> dict:
    """JSON-ready dict mirroring the report fields, plus cost when priced."""
    doc = {
        "kg": kg,
        "community": requirement.community,
        "task": requirement.task,
        "fit": report.fit,
        "satisfied": _features_json(report.satisfied),
        "gap": _features_json(report.gap),
        "surplus": _features_json(report.surplus),
    }
    if cost is not None:
        doc["cost"] = cost
    return doc


def delta_json(delta: Mapping[Dimension, FeatureDelta], *, source: str, target: str) -> dict:
    """JSON-ready dict of a transformation delta."""
    return {
        "source": source,
        "target": target,
        "delta": {
            d.value: {"add": sorted(fd.add), "remove": sorted(fd.remove)}
            for d, fd in sorted(delta.items(), key=lambda kv: _DIMENSION_ORDER[kv[0]])
        },
    }
