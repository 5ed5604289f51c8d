"""Derivation operators, closed-set enumeration, lattices, and implications.

Everything here is a pure function over immutable contexts. Attribute and
object sets are handled internally as integer bitmasks in declaration order;
the public surface speaks frozensets of names.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass
from functools import cached_property

from .context import FormalContext
from .errors import InputError


@dataclass(frozen=True)
class FormalConcept:
    """A Galois fixpoint: the extent derives the intent and vice versa."""

    extent: frozenset[str]
    intent: frozenset[str]


@dataclass(frozen=True)
class Implication:
    """Attribute rule ``premise -> conclusion``, stored with disjoint sides."""

    premise: frozenset[str]
    conclusion: frozenset[str]

    def __post_init__(self) -> None:
        premise = frozenset(self.premise)
        object.__setattr__(self, "premise", premise)
        object.__setattr__(self, "conclusion", frozenset(self.conclusion) - premise)


# --- bitmask plumbing ---------------------------------------------------------


def _attr_mask(ctx: FormalContext, attrs: Iterable[str]) -> int:
    mask = 0
    index = ctx.attribute_index
    for name in attrs:
        if name not in index:
            raise InputError("unknown-attribute", f"unknown attribute {name!r}")
        mask |= 1 << index[name]
    return mask


def _obj_mask(ctx: FormalContext, objs: Iterable[str]) -> int:
    mask = 0
    index = ctx.object_index
    for name in objs:
        if name not in index:
            raise InputError("unknown-object", f"unknown object {name!r}")
        mask |= 1 << index[name]
    return mask


def _attr_names(ctx: FormalContext, mask: int) -> frozenset[str]:
    return frozenset(a for j, a in enumerate(ctx.attributes) if mask >> j & 1)


def _obj_names(ctx: FormalContext, mask: int) -> frozenset[str]:
    return frozenset(o for i, o in enumerate(ctx.objects) if mask >> i & 1)


def _extent_mask(ctx: FormalContext, amask: int) -> int:
    """Objects incident to every attribute in amask; all objects for amask == 0."""
    out = 0
    for i, row in enumerate(ctx.row_masks):
        if row & amask == amask:
            out |= 1 << i
    return out


def _intent_mask(ctx: FormalContext, omask: int) -> int:
    """Attributes shared by every object in omask; all attributes for omask == 0."""
    mask = (1 << len(ctx.attributes)) - 1
    rows = ctx.row_masks
    i = 0
    while omask:
        if omask & 1:
            mask &= rows[i]
        omask >>= 1
        i += 1
    return mask


def _close_attr_mask(ctx: FormalContext, amask: int) -> int:
    return _intent_mask(ctx, _extent_mask(ctx, amask))


# --- derivation and closure ---------------------------------------------------


def derive_attributes(ctx: FormalContext, objects: Iterable[str]) -> frozenset[str]:
    """Attributes common to all named objects; the empty set derives every attribute."""
    return _attr_names(ctx, _intent_mask(ctx, _obj_mask(ctx, objects)))


def derive_objects(ctx: FormalContext, attributes: Iterable[str]) -> frozenset[str]:
    """Objects carrying all named attributes; the empty set derives every object."""
    return _obj_names(ctx, _extent_mask(ctx, _attr_mask(ctx, attributes)))


def close_attributes(ctx: FormalContext, attributes: Iterable[str]) -> frozenset[str]:
    """Double derivation of an attribute set: extensive, monotone, idempotent."""
    return _attr_names(ctx, _close_attr_mask(ctx, _attr_mask(ctx, attributes)))


# --- closed-set enumeration ---------------------------------------------------


def _next_closed_mask(close, mask: int, n: int) -> int | None:
    """Smallest closed set lectically greater than mask, or None at the end.

    Walks candidate positions from the highest bit down: drop everything
    above position i, switch i on, close, and accept the first candidate
    agreeing with mask below i.
    """
    for i in range(n - 1, -1, -1):
        bit = 1 << i
        if mask & bit:
            continue
        low = bit - 1
        candidate = close((mask & low) | bit)
        if candidate & low == mask & low:
            return candidate
    return None


def next_closure(ctx: FormalContext, current: Iterable[str] | None = None) -> frozenset[str] | None:
    """Step the lectic enumeration of closed attribute sets.

    None starts the walk at close({}). Each later call takes the previously
    returned set and yields its lectic successor, or None once the full
    attribute set (always closed) has been emitted. The enumeration visits
    every closed set exactly once, so its length equals the concept count.
    """
    n = len(ctx.attributes)
    if current is None:
        return _attr_names(ctx, _close_attr_mask(ctx, 0))
    mask = _attr_mask(ctx, current)
    if _close_attr_mask(ctx, mask) != mask:
        raise InputError("not-closed", "current set is not closed in this context")
    nxt = _next_closed_mask(lambda m: _close_attr_mask(ctx, m), mask, n)
    return None if nxt is None else _attr_names(ctx, nxt)


def _closed_intent_masks(ctx: FormalContext) -> Iterator[int]:
    n = len(ctx.attributes)
    full = (1 << n) - 1
    mask = _close_attr_mask(ctx, 0)
    while True:
        yield mask
        if mask == full:
            return
        mask = _next_closed_mask(lambda m: _close_attr_mask(ctx, m), mask, n)


def _canonical_key(concept: FormalConcept) -> tuple[int, tuple[str, ...]]:
    return len(concept.extent), tuple(sorted(concept.extent))


def enumerate_concepts(ctx: FormalContext) -> tuple[FormalConcept, ...]:
    """All formal concepts, in canonical order.

    Canonical order: extent cardinality ascending, ties broken by comparing
    the sorted extent name tuples. Distinct concepts have distinct extents,
    so the order is total.
    """
    concepts = []
    for imask in _closed_intent_masks(ctx):
        emask = _extent_mask(ctx, imask)
        concepts.append(FormalConcept(_obj_names(ctx, emask), _attr_names(ctx, imask)))
    concepts.sort(key=_canonical_key)
    return tuple(concepts)


# --- lattice --------------------------------------------------------------


@dataclass(frozen=True)
class ConceptLattice:
    """Concepts in canonical order plus the cover relation of extent inclusion.

    covers holds (lower, upper) index pairs of the transitive reduction;
    every other comparability follows from chains of covers.
    """

    context: FormalContext
    concepts: tuple[FormalConcept, ...]
    covers: frozenset[tuple[int, int]]
    top_index: int
    bottom_index: int

    @cached_property
    def _index_by_extent(self) -> dict[frozenset[str], int]:
        return {c.extent: i for i, c in enumerate(self.concepts)}

    def index_of_extent(self, extent: frozenset[str]) -> int:
        try:
            return self._index_by_extent[frozenset(extent)]
        except KeyError:
            raise InputError("unknown-extent", f"no concept has extent {sorted(extent)}") from None

    @cached_property
    def upper_covers(self) -> tuple[tuple[int, ...], ...]:
        ups: list[list[int]] = [[] for _ in self.concepts]
        for lo, up in sorted(self.covers):
            ups[lo].append(up)
        return tuple(tuple(u) for u in ups)

    @cached_property
    def lower_covers(self) -> tuple[tuple[int, ...], ...]:
        los: list[list[int]] = [[] for _ in self.concepts]
        for lo, up in sorted(self.covers):
            los[up].append(lo)
        return tuple(tuple(l) for l in los)

    def _concept_at(self, index: int) -> FormalConcept:
        if not 0 <= index < len(self.concepts):
            raise InputError("index-out-of-range", f"concept index {index} out of range 0..{len(self.concepts) - 1}")
        return self.concepts[index]


def build_lattice(ctx: FormalContext) -> ConceptLattice:
    """Enumerate the concepts and compute the cover relation.

    Cover computation is cubic in the concept count: comparabilities are
    collected as per-concept bitmasks, and (i, j) is a cover when nothing
    lies strictly between. Fine for desk-scale contexts.
    """
    concepts = enumerate_concepts(ctx)
    n = len(concepts)
    extents = [_obj_mask(ctx, c.extent) for c in concepts]
    above = [0] * n  # above[i]: bitmask of j with extent_i strictly inside extent_j
    below = [0] * n
    for i in range(n):
        ei = extents[i]
        # canonical order sorts by extent size, so any j with a strictly
        # larger extent comes after i
        for j in range(i + 1, n):
            if ei & extents[j] == ei and ei != extents[j]:
                above[i] |= 1 << j
                below[j] |= 1 << i
    covers = set()
    for i in range(n):
        rest = above[i]
        while rest:
            jbit = rest & -rest
            rest ^= jbit
            j = jbit.bit_length() - 1
            if not above[i] & below[j]:
                covers.add((i, j))
    top_index = next(i for i, c in enumerate(concepts) if len(c.extent) == len(ctx.objects))
    bottom_index = next(i for i, c in enumerate(concepts) if len(c.intent) == len(ctx.attributes))
    return ConceptLattice(ctx, concepts, frozenset(covers), top_index, bottom_index)


def meet(lattice: ConceptLattice, i: int, j: int) -> int:
    """Index of the greatest lower bound of two concepts."""
    a = lattice._concept_at(i).extent & lattice._concept_at(j).extent
    ctx = lattice.context
    emask = _extent_mask(ctx, _intent_mask(ctx, _obj_mask(ctx, a)))
    return lattice.index_of_extent(_obj_names(ctx, emask))


def join(lattice: ConceptLattice, i: int, j: int) -> int:
    """Index of the least upper bound of two concepts."""
    b = lattice._concept_at(i).intent & lattice._concept_at(j).intent
    ctx = lattice.context
    emask = _extent_mask(ctx, _attr_mask(ctx, b))
    return lattice.index_of_extent(_obj_names(ctx, emask))


def lattice_json(lattice: ConceptLattice) -> dict:
    """JSON-ready dict: concepts with canonical ids, cover pairs, top and bottom.

    Ids are canonical-order labels c0, c1, ... and extent/intent lists follow
    declaration order, so the output is deterministic.
    """
    ctx = lattice.context
    concepts = [
        {
            "id": f"c{i}",
            "extent": [o for o in ctx.objects if o in c.extent],
            "intent": [a for a in ctx.attributes if a in c.intent],
        }
        for i, c in enumerate(lattice.concepts)
    ]
    covers = [[f"c{lo}", f"c{up}"] for lo, up in sorted(lattice.covers)]
    return {
        "concepts": concepts,
        "covers": covers,
        "top": f"c{lattice.top_index}",
        "bottom": f"c{lattice.bottom_index}",
    }


# --- implications -----------------------------------------------------------


def implication_holds(ctx: FormalContext, implication: Implication) -> bool:
    """True iff every object carrying the premise also carries the conclusion."""
    pmask = _attr_mask(ctx, implication.premise)
    cmask = _attr_mask(ctx, implication.conclusion)
    return cmask & _close_attr_mask(ctx, pmask) == cmask


def close_under_implications(implications: Iterable[Implication], attributes: Iterable[str]) -> frozenset[str]:
    """Least superset of the given attributes respecting every implication."""
    imps = list(implications)
    out = set(attributes)
    changed = True
    while changed:
        changed = False
        for imp in imps:
            if imp.premise <= out and not imp.conclusion <= out:
                out |= imp.conclusion
                changed = True
    return frozenset(out)


def follows_from(implication: Implication, basis: Iterable[Implication]) -> bool:
    """Whether an implication is entailed by a set of implications."""
    return implication.conclusion <= close_under_implications(basis, implication.premise)


def _l_close(mask: int, imps: Sequence[tuple[int, int]]) -> int:
    """Fixpoint of firing (premise, closure) pairs whose premise is contained."""
    changed = True
    while changed:
        changed = False
        for p, c in imps:
            if p & mask == p and c & ~mask:
                mask |= c
                changed = True
    return mask


def implication_basis(ctx: FormalContext) -> tuple[Implication, ...]:
    """Minimum implication set that is sound and complete for the context.

    Walks, in lectic order, the sets closed under the implications found so
    far; each such set that is not closed in the context is a pseudo-closed
    premise and contributes the implication premise -> closure \\ premise.
    No equally complete set of implications is smaller.
    """
    n = len(ctx.attributes)
    full = (1 << n) - 1
    found: list[tuple[int, int]] = []  # (premise mask, context closure of premise)
    mask = 0
    while True:
        closed = _close_attr_mask(ctx, mask)
        if closed != mask:
            found.append((mask, closed))
        if mask == full:
            break
        nxt = _next_closed_mask(lambda m: _l_close(m, found), mask, n)
        if nxt is None:  # cannot happen before the full set is visited
            break
        mask = nxt
    return tuple(Implication(_attr_names(ctx, p), _attr_names(ctx, c & ~p)) for p, c in found)
