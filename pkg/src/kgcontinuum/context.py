"""Formal contexts, their file carriers, and the feature registry.

A formal context is a binary objects-by-attributes incidence table. Contexts
are immutable; operations that look like mutation (registering a feature,
merging) return new values.
"""

from __future__ import annotations

import json
import re
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from types import MappingProxyType

from .errors import InputError

_WS_RUN = re.compile(r"\s+")


def normalize_name(name: str) -> str:
    """Trim and collapse internal whitespace runs to a single space.

    Comparison of names stays case-sensitive.
    """
    return _WS_RUN.sub(" ", name.strip())


class Dimension(Enum):
    """Characterisation axis an attribute set belongs to."""

    SEMANTIC_PROPERTY = "semantic-property"
    SEMANTIC_AFFORDANCE = "semantic-affordance"
    PRAGMATIC_PROPERTY = "pragmatic-property"
    PRAGMATIC_AFFORDANCE = "pragmatic-affordance"
    COMBINED = "combined"

    @classmethod
    def from_tag(cls, tag: str) -> "Dimension":
        try:
            return cls(tag)
        except ValueError:
            raise InputError("unknown-dimension", f"unknown dimension tag {tag!r}") from None


#: The four per-dimension axes in report order. COMBINED is produced only by merging.
PER_DIMENSION = (
    Dimension.SEMANTIC_PROPERTY,
    Dimension.SEMANTIC_AFFORDANCE,
    Dimension.PRAGMATIC_PROPERTY,
    Dimension.PRAGMATIC_AFFORDANCE,
)


def _unique_names(names: Iterable[str], kind: str) -> tuple[str, ...]:
    out: list[str] = []
    seen: set[str] = set()
    for raw in names:
        name = normalize_name(raw)
        if not name:
            raise InputError("empty-name", f"{kind} name is empty after normalization")
        if name in seen:
            raise InputError(f"duplicate-{kind}", f"{kind} {name!r} declared twice", location=name)
        seen.add(name)
        out.append(name)
    return tuple(out)


@dataclass(frozen=True)
class FormalContext:
    """Objects-by-attributes incidence table tagged with a dimension.

    Declaration order of objects and attributes is part of the value: it fixes
    the lectic order used when enumerating closed attribute sets, and the
    display order of names in tables and diagrams.
    """

    dimension: Dimension
    objects: tuple[str, ...]
    attributes: tuple[str, ...]
    incidence: tuple[tuple[bool, ...], ...]

    def __post_init__(self) -> None:
        objects = _unique_names(self.objects, "object")
        attributes = _unique_names(self.attributes, "attribute")
        rows = tuple(tuple(bool(v) for v in row) for row in self.incidence)
        if len(rows) != len(objects):
            raise InputError(
                "count-mismatch",
                f"{len(objects)} objects but {len(rows)} incidence rows",
            )
        for obj, row in zip(objects, rows):
            if len(row) != len(attributes):
                raise InputError(
                    "count-mismatch",
                    f"row for {obj!r} has {len(row)} cells, expected {len(attributes)}",
                    location=obj,
                )
        object.__setattr__(self, "objects", objects)
        object.__setattr__(self, "attributes", attributes)
        object.__setattr__(self, "incidence", rows)

    @cached_property
    def object_index(self) -> Mapping[str, int]:
        return MappingProxyType({name: i for i, name in enumerate(self.objects)})

    @cached_property
    def attribute_index(self) -> Mapping[str, int]:
        return MappingProxyType({name: j for j, name in enumerate(self.attributes)})

    @cached_property
    def row_masks(self) -> tuple[int, ...]:
        """Per-object attribute bitmask; bit j corresponds to attributes[j]."""
        masks = []
        for row in self.incidence:
            m = 0
            for j, v in enumerate(row):
                if v:
                    m |= 1 << j
            masks.append(m)
        return tuple(masks)

    def features_of(self, obj: str) -> frozenset[str]:
        """Attributes incident to one object."""
        name = normalize_name(obj)
        if name not in self.object_index:
            raise InputError("unknown-object", f"unknown object {obj!r}")
        row = self.incidence[self.object_index[name]]
        return frozenset(a for a, v in zip(self.attributes, row) if v)

    def holders_of(self, attr: str) -> frozenset[str]:
        """Objects incident to one attribute."""
        name = normalize_name(attr)
        if name not in self.attribute_index:
            raise InputError("unknown-attribute", f"unknown attribute {attr!r}")
        j = self.attribute_index[name]
        return frozenset(o for o, row in zip(self.objects, self.incidence) if row[j])

    @classmethod
    def from_feature_sets(
        cls,
        dimension: Dimension,
        objects: Sequence[str],
        features: Mapping[str, Iterable[str]],
        attributes: Sequence[str] | None = None,
    ) -> "FormalContext":
        """Build a context from per-object feature sets.

        When ``attributes`` is omitted the column order is first appearance
        while reading objects in the given order.
        """
        objs = _unique_names(objects, "object")
        feats = {normalize_name(o): frozenset(normalize_name(f) for f in fs) for o, fs in features.items()}
        unknown = set(feats) - set(objs)
        if unknown:
            raise InputError("unknown-object", f"feature sets for undeclared objects: {sorted(unknown)}")
        if attributes is None:
            cols: list[str] = []
            for o in objs:
                for f in sorted(feats.get(o, frozenset())):
                    if f not in cols:
                        cols.append(f)
        else:
            cols = list(_unique_names(attributes, "attribute"))
            for o, fs in feats.items():
                stray = fs - set(cols)
                if stray:
                    raise InputError("unknown-attribute", f"features of {o!r} not declared: {sorted(stray)}")
        rows = tuple(tuple(c in feats.get(o, frozenset()) for c in cols) for o in objs)
        return cls(dimension, objs, tuple(cols), rows)


# --- Burmeister CXT carrier -------------------------------------------------


def parse_cxt(text: str, dimension: Dimension = Dimension.COMBINED) -> FormalContext:
    """Parse a Burmeister CXT document.

    Layout: ``B``, blank line, object count, attribute count, blank line,
    object names, attribute names, then one row of ``X``/``.`` per object.
    The format carries no dimension; it is supplied out of band.
    """
    lines = text.split("\n")
    if len(lines) > 1 and lines[-1] == "":
        lines.pop()  # a final newline ends the last line, it does not open a new one

    def take(idx: int, what: str) -> str:
        if idx >= len(lines):
            raise InputError("count-mismatch", f"missing {what}", location=f"line {idx + 1}")
        return lines[idx]

    if take(0, "format marker").rstrip() != "B":
        raise InputError("malformed-header", "first line must be 'B'", location="line 1")
    if take(1, "separator").strip():
        raise InputError("malformed-header", "second line must be blank", location="line 2")

    def count(idx: int, what: str) -> int:
        raw = take(idx, what).strip()
        if not raw.isdigit():
            raise InputError("malformed-header", f"{what} must be a decimal count, got {raw!r}", location=f"line {idx + 1}")
        return int(raw)

    n_objects = count(2, "object count")
    n_attributes = count(3, "attribute count")
    if take(4, "separator").strip():
        raise InputError("malformed-header", "fifth line must be blank", location="line 5")

    pos = 5
    object_names: list[str] = []
    attribute_names: list[str] = []
    for k in range(n_objects + n_attributes):
        kind = "object" if k < n_objects else "attribute"
        name = normalize_name(take(pos, f"{kind} name"))
        bucket = object_names if kind == "object" else attribute_names
        if not name:
            raise InputError("empty-name", f"{kind} name is empty", location=f"line {pos + 1}")
        if name in bucket:
            raise InputError(f"duplicate-{kind}", f"{kind} {name!r} already declared", location=f"line {pos + 1}")
        bucket.append(name)
        pos += 1

    rows: list[tuple[bool, ...]] = []
    for _ in range(n_objects):
        raw = take(pos, "incidence row").rstrip()
        cells = []
        for ch in raw:
            if ch == "X":
                cells.append(True)
            elif ch == ".":
                cells.append(False)
            else:
                raise InputError("invalid-row", f"rows may contain only 'X' and '.', got {ch!r}", location=f"line {pos + 1}")
        if len(cells) != n_attributes:
            raise InputError("count-mismatch", f"row has {len(cells)} cells, expected {n_attributes}", location=f"line {pos + 1}")
        rows.append(tuple(cells))
        pos += 1

    for idx in range(pos, len(lines)):
        if lines[idx].strip():
            raise InputError("trailing-content", "unexpected content after incidence rows", location=f"line {idx + 1}")

    return FormalContext(dimension, tuple(object_names), tuple(attribute_names), tuple(rows))


def serialize_cxt(ctx: FormalContext) -> str:
    """Emit a Burmeister CXT document; inverse of parse_cxt modulo the dimension tag."""
    lines = ["B", "", str(len(ctx.objects)), str(len(ctx.attributes)), ""]
    lines.extend(ctx.objects)
    lines.extend(ctx.attributes)
    for row in ctx.incidence:
        lines.append("".join("X" if v else "." for v in row))
    return "\n".join(lines) + "\n"


# --- JSON carrier -----------------------------------------------------------

_JSON_KEYS = ("dimension", "objects", "attributes", "incidence")


def parse_json_context(text: str) -> FormalContext:
    """Parse the JSON context document; unlike CXT it carries its dimension."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError("invalid-json", str(exc)) from None
    if not isinstance(doc, dict):
        raise InputError("schema-violation", "top level must be an object")
    missing = set(_JSON_KEYS) - doc.keys()
    if missing:
        raise InputError("schema-violation", f"missing keys: {', '.join(sorted(missing))}")
    extra = doc.keys() - set(_JSON_KEYS)
    if extra:
        raise InputError("schema-violation", f"unexpected keys: {', '.join(sorted(extra))}")
    if not isinstance(doc["dimension"], str):
        raise InputError("schema-violation", "dimension must be a string")
    dimension = Dimension.from_tag(doc["dimension"])
    for key in ("objects", "attributes"):
        if not isinstance(doc[key], list) or not all(isinstance(x, str) for x in doc[key]):
            raise InputError("schema-violation", f"{key} must be a list of strings")
    inc = doc["incidence"]
    if not isinstance(inc, list):
        raise InputError("schema-violation", "incidence must be a list of rows")
    rows = []
    for i, row in enumerate(inc):
        if not isinstance(row, list) or not all(isinstance(v, (bool, int)) and v in (0, 1) for v in row):
            raise InputError("schema-violation", "incidence rows must contain only 0 and 1", location=f"row {i}")
        rows.append(tuple(bool(v) for v in row))
    return FormalContext(dimension, tuple(doc["objects"]), tuple(doc["attributes"]), tuple(rows))


def serialize_json_context(ctx: FormalContext) -> str:
    """Emit the JSON context document; inverse of parse_json_context."""
    doc = {
        "dimension": ctx.dimension.value,
        "objects": list(ctx.objects),
        "attributes": list(ctx.attributes),
        "incidence": [[1 if v else 0 for v in row] for row in ctx.incidence],
    }
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


# --- Validation -------------------------------------------------------------


@dataclass(frozen=True)
class Finding:
    code: str
    message: str
    location: str | None = None


@dataclass(frozen=True)
class ValidationReport:
    errors: tuple[Finding, ...] = ()
    warnings: tuple[Finding, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.errors


def validate_context(ctx: FormalContext) -> ValidationReport:
    """Report structural warnings.

    A successfully constructed context has no structural errors, so the
    report's error list is empty; parse failures surface as exceptions
    before a context exists. Warnings flag degenerate columns: attributes
    exhibited by every object or by none.
    """
    warnings = []
    for j, attr in enumerate(ctx.attributes):
        column = [row[j] for row in ctx.incidence]
        if not any(column):
            warnings.append(Finding("vacuous-attribute", f"no object exhibits {attr!r}", attr))
        elif all(column):
            warnings.append(Finding("universal-attribute", f"every object exhibits {attr!r}", attr))
    return ValidationReport(errors=(), warnings=tuple(warnings))


def attribute_frequency(ctx: FormalContext) -> Mapping[str, int]:
    """Number of objects exhibiting each attribute, keyed by attribute name."""
    freq = {a: 0 for a in ctx.attributes}
    for row in ctx.incidence:
        for a, v in zip(ctx.attributes, row):
            if v:
                freq[a] += 1
    return MappingProxyType(freq)


def universal_features(contexts: Iterable[FormalContext]) -> tuple[tuple[Dimension, str], ...]:
    """(dimension, attribute) pairs exhibited by every object of their context."""
    out = []
    for ctx in contexts:
        if not ctx.objects:
            continue
        freq = attribute_frequency(ctx)
        out.extend((ctx.dimension, a) for a in ctx.attributes if freq[a] == len(ctx.objects))
    return tuple(out)


def singleton_features(contexts: Iterable[FormalContext]) -> tuple[tuple[Dimension, str], ...]:
    """(dimension, attribute) pairs exhibited by exactly one object."""
    out = []
    for ctx in contexts:
        freq = attribute_frequency(ctx)
        out.extend((ctx.dimension, a) for a in ctx.attributes if freq[a] == 1)
    return tuple(out)


# --- Feature registry -------------------------------------------------------


@dataclass(frozen=True)
class RegistryEntry:
    name: str
    dimension: Dimension
    introduced_by: str | None = None
    description: str = ""


@dataclass(frozen=True)
class FeatureRegistry:
    """Append-only catalogue of known features; each belongs to one dimension."""

    entries: tuple[RegistryEntry, ...] = ()

    @cached_property
    def _by_name(self) -> Mapping[str, RegistryEntry]:
        return MappingProxyType({e.name: e for e in self.entries})

    def get(self, name: str) -> RegistryEntry | None:
        return self._by_name.get(normalize_name(name))

    def __contains__(self, name: str) -> bool:
        return self.get(name) is not None

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class RetroCheckReport:
    """Objects whose rows predate a newly registered feature.

    Their incidence was recorded before the feature existed, so each listed
    object needs its row re-examined by hand; the toolkit only tracks the
    debt, it cannot settle it.
    """

    feature: str
    dimension: Dimension
    pending: tuple[str, ...]


def register_feature(
    registry: FeatureRegistry,
    name: str,
    dimension: Dimension,
    contexts: Iterable[FormalContext] = (),
    *,
    introduced_by: str | None = None,
    description: str = "",
) -> tuple[FeatureRegistry, RetroCheckReport]:
    """Add a feature to the registry, reporting objects that need re-checking.

    Registering a name that already exists under the same dimension is a
    no-op with an empty report; under a different dimension it is an error.
    """
    name = normalize_name(name)
    if not name:
        raise InputError("empty-name", "feature name is empty after normalization")
    if dimension is Dimension.COMBINED:
        raise InputError("combined-dimension", "features register under a per-dimension axis, not combined")
    existing = registry.get(name)
    if existing is not None:
        if existing.dimension is not dimension:
            raise InputError(
                "dimension-conflict",
                f"{name!r} is already registered under {existing.dimension.value}",
                location=name,
            )
        return registry, RetroCheckReport(name, dimension, ())
    pending: list[str] = []
    for ctx in contexts:
        if ctx.dimension is dimension and name not in ctx.attribute_index:
            for obj in ctx.objects:
                if obj not in pending:
                    pending.append(obj)
    entry = RegistryEntry(name, dimension, introduced_by, description)
    return FeatureRegistry(registry.entries + (entry,)), RetroCheckReport(name, dimension, tuple(pending))


def registry_from_contexts(contexts: Iterable[FormalContext]) -> FeatureRegistry:
    """Bulk-register every attribute of the given per-dimension contexts.

    introduced_by is the first object exhibiting the attribute, if any.
    """
    registry = FeatureRegistry()
    for ctx in contexts:
        for j, attr in enumerate(ctx.attributes):
            first = next((o for o, row in zip(ctx.objects, ctx.incidence) if row[j]), None)
            registry, _ = register_feature(registry, attr, ctx.dimension, introduced_by=first)
    return registry


# --- Merging ----------------------------------------------------------------


def merge_contexts(contexts: Sequence[FormalContext]) -> FormalContext:
    """Merge per-dimension contexts over one object set into a combined context.

    Attributes are qualified as ``<dimension>:<name>`` so the merged columns
    stay pairwise distinct; incidence is concatenated horizontally.
    """
    if not contexts:
        raise InputError("empty-merge", "nothing to merge")
    base = contexts[0].objects
    for ctx in contexts[1:]:
        if ctx.objects != base:
            raise InputError("object-mismatch", "contexts disagree on the object set or its order")
    attrs: list[str] = []
    seen: set[str] = set()
    for ctx in contexts:
        for a in ctx.attributes:
            qualified = f"{ctx.dimension.value}:{a}"
            if qualified in seen:
                raise InputError("attribute-collision", f"duplicate qualified attribute {qualified!r}", location=qualified)
            seen.add(qualified)
            attrs.append(qualified)
    rows = tuple(
        tuple(v for ctx in contexts for v in ctx.incidence[i])
        for i in range(len(base))
    )
    return FormalContext(Dimension.COMBINED, base, tuple(attrs), rows)
