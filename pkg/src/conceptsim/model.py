"""Concept networks: layered concepts defined by conditional bistable patterns.

A network is a hierarchy of named concepts. Layer-0 concepts are clampable
observations and carry no patterns; every concept above layer 0 is defined by
one or more patterns, each a set of concepts exactly one layer below. Against
a given set of active concepts a pattern is in one of three states:

  Off                   fewer than the threshold fraction of elements present
  ApplicableIncomplete  at least the threshold fraction present, but not all
  Complete              every element present

A concept *is* its pattern set; everything else in the package (oracle and
circuit dynamics alike) is built on this evaluation.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import AbstractSet, Mapping

from .errors import (
    BottomWithPatterns,
    DanglingReference,
    DuplicateElement,
    DuplicateName,
    DuplicatePattern,
    EmptyPattern,
    LayerViolation,
    NonBottomWithoutPatterns,
    UnknownConcept,
    ValidationError,
)

ConceptId = int

#: Default applicability threshold: half of a pattern's elements, inclusive.
DEFAULT_TAU = 0.5


class PatternStatus(Enum):
    OFF = "Off"
    APPLICABLE_INCOMPLETE = "ApplicableIncomplete"
    COMPLETE = "Complete"


@dataclass(frozen=True)
class PatternState:
    """Evaluation of one pattern against an active set."""

    status: PatternStatus
    present_fraction: Fraction

    @property
    def applicable(self) -> bool:
        """At least the threshold fraction of elements is present (state != Off)."""
        return self.status is not PatternStatus.OFF

    @property
    def complete(self) -> bool:
        return self.status is PatternStatus.COMPLETE


@dataclass(frozen=True)
class Pattern:
    """A conditional bistable pattern: element ids one layer below the owner."""

    elements: frozenset[ConceptId]

    def __post_init__(self) -> None:
        if not isinstance(self.elements, frozenset):
            object.__setattr__(self, "elements", frozenset(self.elements))

    def __len__(self) -> int:
        return len(self.elements)


@dataclass(frozen=True)
class ConceptSpec:
    """One concept as written in a network file; patterns reference element names."""

    name: str
    layer: int
    patterns: tuple[tuple[str, ...], ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "patterns", tuple(tuple(p) for p in self.patterns))


@dataclass(frozen=True)
class NetworkSpec:
    """An ordered list of concept declarations, as parsed; not yet validated."""

    concepts: tuple[ConceptSpec, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "concepts", tuple(self.concepts))


@dataclass(frozen=True)
class ValidatedNetwork:
    """Immutable, index-accelerated view of a structurally valid network.

    Concept ids are dense and assigned in file order. parent_index maps every
    element id to the (owner id, pattern ordinal) pairs whose pattern contains
    it, sorted by owner then ordinal.
    """

    spec: NetworkSpec
    names: tuple[str, ...]
    layer_of: tuple[int, ...]
    patterns: tuple[tuple[Pattern, ...], ...]
    layers: Mapping[int, tuple[ConceptId, ...]]
    parent_index: Mapping[ConceptId, tuple[tuple[ConceptId, int], ...]]
    name_to_id: Mapping[str, ConceptId]
    warnings: tuple[str, ...] = ()

    @property
    def n_concepts(self) -> int:
        return len(self.names)

    @property
    def max_layer(self) -> int:
        return max(self.layer_of, default=0)

    @property
    def bottom(self) -> tuple[ConceptId, ...]:
        return self.layers.get(0, ())

    @property
    def non_bottom(self) -> tuple[ConceptId, ...]:
        return tuple(c for c in range(self.n_concepts) if self.layer_of[c] > 0)

    def layer(self, cid: ConceptId) -> int:
        self._check(cid)
        return self.layer_of[cid]

    def name(self, cid: ConceptId) -> str:
        self._check(cid)
        return self.names[cid]

    def id_of(self, name: str) -> ConceptId:
        try:
            return self.name_to_id[name]
        except KeyError:
            raise UnknownConcept(f"no concept named {name!r}") from None

    def patterns_of(self, cid: ConceptId) -> tuple[Pattern, ...]:
        self._check(cid)
        return self.patterns[cid]

    def _check(self, cid: ConceptId) -> None:
        if not 0 <= cid < self.n_concepts:
            raise UnknownConcept(f"no concept with id {cid}")


def pattern_state(
    pattern: Pattern,
    active: AbstractSet[ConceptId],
    tau: float | Fraction = DEFAULT_TAU,
) -> PatternState:
    """Evaluate a pattern against a set of active concept ids.

    Pure function; tau must lie in (0, 1] and is compared inclusively, so with
    the default 0.5 a pattern with one of two elements present is applicable.
    """
    size = len(pattern.elements)
    present = len(pattern.elements & active)
    fraction = Fraction(present, size)
    if present == size:
        status = PatternStatus.COMPLETE
    elif fraction >= tau:
        status = PatternStatus.APPLICABLE_INCOMPLETE
    else:
        status = PatternStatus.OFF
    return PatternState(status, fraction)


def validate_network(spec: NetworkSpec) -> ValidatedNetwork:
    """Check every structural invariant and build the index structures.

    Raises a ValidationError subclass naming the offending concept/pattern;
    singleton patterns are legal but reported via ValidatedNetwork.warnings
    (they can never be applicable-incomplete, so they cannot express a
    bistability violation).
    """
    names: list[str] = []
    name_to_id: dict[str, ConceptId] = {}
    for cid, c in enumerate(spec.concepts):
        if not isinstance(c.name, str) or not c.name:
            raise ValidationError(f"concept {cid}: name must be a non-empty string")
        if c.name in name_to_id:
            raise DuplicateName(f"concept name {c.name!r} appears more than once")
        if type(c.layer) is not int or c.layer < 0:
            raise LayerViolation(f"concept {c.name!r}: layer must be a non-negative integer")
        name_to_id[c.name] = cid
        names.append(c.name)

    layer_of = tuple(c.layer for c in spec.concepts)
    warnings: list[str] = []
    resolved: list[tuple[Pattern, ...]] = []
    for cid, c in enumerate(spec.concepts):
        if c.layer == 0:
            if c.patterns:
                raise BottomWithPatterns(f"layer-0 concept {c.name!r} must not carry patterns")
            resolved.append(())
            continue
        if not c.patterns:
            raise NonBottomWithoutPatterns(f"concept {c.name!r} on layer {c.layer} has no patterns")
        seen: list[frozenset[ConceptId]] = []
        pats: list[Pattern] = []
        for k, elems in enumerate(c.patterns):
            where = f"concept {c.name!r} pattern {k}"
            if not elems:
                raise EmptyPattern(f"{where} is empty")
            if len(set(elems)) != len(elems):
                raise DuplicateElement(f"{where} lists an element twice")
            ids = []
            for ename in elems:
                if ename not in name_to_id:
                    raise DanglingReference(f"{where} references unknown concept {ename!r}")
                ids.append(name_to_id[ename])
            for eid in ids:
                if layer_of[eid] != c.layer - 1:
                    raise LayerViolation(
                        f"{where}: element {names[eid]!r} is on layer {layer_of[eid]}, "
                        f"expected layer {c.layer - 1}"
                    )
            members = frozenset(ids)
            if members in seen:
                raise DuplicatePattern(f"{where} duplicates an earlier pattern of {c.name!r}")
            seen.append(members)
            if len(members) == 1:
                warnings.append(f"{where} has a single element; it can never be applicable-incomplete")
            pats.append(Pattern(members))
        resolved.append(tuple(pats))

    layers: dict[int, tuple[ConceptId, ...]] = {}
    for lay in sorted(set(layer_of)):
        layers[lay] = tuple(c for c in range(len(names)) if layer_of[c] == lay)

    parent_index: dict[ConceptId, tuple[tuple[ConceptId, int], ...]] = {
        cid: () for cid in range(len(names))
    }
    inverse: dict[ConceptId, list[tuple[ConceptId, int]]] = {}
    for cid in range(len(names)):
        for k, pat in enumerate(resolved[cid]):
            for e in pat.elements:
                inverse.setdefault(e, []).append((cid, k))
    for e, owners in inverse.items():
        parent_index[e] = tuple(sorted(owners))

    return ValidatedNetwork(
        spec=spec,
        names=tuple(names),
        layer_of=layer_of,
        patterns=tuple(resolved),
        layers=layers,
        parent_index=parent_index,
        name_to_id=name_to_id,
        warnings=tuple(warnings),
    )


def element_parents(net: ValidatedNetwork, cid: ConceptId) -> list[tuple[ConceptId, int]]:
    """All (owner, pattern ordinal) pairs whose pattern contains cid, in owner/ordinal order."""
    net._check(cid)
    return list(net.parent_index.get(cid, ()))
