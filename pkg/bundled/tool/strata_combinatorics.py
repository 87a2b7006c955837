# Copyright (c) strata-rings contributors. All rights reserved.
# Licensed under the MIT License.
"""Canonical index sets of boundary classes and the predicates relating them.

Subsets of a ground set are bitmasks over its ordered label list. A ground set
may carry the node mark ``nd``, which occupies the position of the smallest
positive integer missing from its integer marks.
"""
from __future__ import annotations

import enum
import functools
from typing import Dict, FrozenSet, Iterable, List, Mapping, Tuple, Union

import attrs
import strata_utils as utils

NODE = "nd"
COMPLEX = "complex"
REAL = "real"
FAMILIES = (COMPLEX, REAL)

Label = Union[int, str]
Subset = Union[int, Iterable[Label]]


def popcount(mask: int) -> int:
    """Returns the number of elements of a subset."""
    return bin(mask).count("1")


def is_subset(inner: int, outer: int) -> bool:
    """Returns true if `inner` is contained in `outer`."""
    return inner & ~outer == 0


def check_family(family: str) -> str:
    """Validates a family name."""
    if family not in FAMILIES:
        raise utils.InvalidArgumentError(
            f"Unknown family {family!r}, expected one of {', '.join(FAMILIES)}."
        )
    return family


# **********************************************************
# Ground sets.
# **********************************************************
def _sorted_marks(marks: Iterable[int]) -> Tuple[int, ...]:
    return tuple(sorted(marks))


@functools.lru_cache(maxsize=None)
def _layout(
    marks: Tuple[int, ...], has_node: bool
) -> Tuple[Tuple[Label, ...], Dict[Label, int]]:
    keyed: List[Tuple[int, Label]] = [(m, m) for m in marks]
    if has_node:
        keyed.append((_smallest_absent(marks), NODE))
    labels = tuple(label for _, label in sorted(keyed))
    return labels, {label: pos for pos, label in enumerate(labels)}


def _smallest_absent(marks: Iterable[int]) -> int:
    present = set(marks)
    value = 1
    while value in present:
        value += 1
    return value


@attrs.frozen
class GroundSet:
    """Ordered set of marks, optionally carrying the node mark."""

    marks: Tuple[int, ...] = attrs.field(converter=_sorted_marks)
    has_node: bool = False

    @marks.validator
    def _check_marks(self, _attribute, value):
        if len(set(value)) != len(value) or any(
            not isinstance(m, int) or m < 1 for m in value
        ):
            raise utils.InvalidArgumentError(
                f"Marks must be distinct positive integers: {value}"
            )

    @property
    def node_value(self) -> int:
        """The integer whose position the node mark takes."""
        return _smallest_absent(self.marks)

    @property
    def labels(self) -> Tuple[Label, ...]:
        return _layout(self.marks, self.has_node)[0]

    @property
    def size(self) -> int:
        return len(self.marks) + (1 if self.has_node else 0)

    @property
    def full(self) -> int:
        return (1 << self.size) - 1

    def bit(self, label: Label) -> int:
        """Returns the one-element subset holding `label`."""
        positions = _layout(self.marks, self.has_node)[1]
        if label not in positions:
            raise utils.InvalidArgumentError(f"Mark {label!r} is not in {self}.")
        return 1 << positions[label]

    def mask(self, labels: Subset) -> int:
        """Converts labels (or an already built mask) to a subset of this ground set."""
        if isinstance(labels, int):
            if not is_subset(labels, self.full):
                raise utils.InvalidArgumentError(
                    f"Subset {labels:#b} is not contained in {self}."
                )
            return labels
        result = 0
        for label in labels:
            result |= self.bit(label)
        return result

    def subset(self, mask: int) -> Tuple[Label, ...]:
        """Returns the labels of a subset in ground-set order."""
        return tuple(
            label for pos, label in enumerate(self.labels) if mask >> pos & 1
        )

    def label_set(self, mask: int) -> FrozenSet[Label]:
        return frozenset(self.subset(mask))

    def render(self, mask: int) -> str:
        """Concatenated marks, comma-separated when any mark is longer than one character."""
        names = [str(label) for label in self.subset(mask)]
        wide = any(len(str(label)) > 1 for label in self.labels)
        return ",".join(names) if wide else "".join(names)

    def __str__(self) -> str:
        return "{" + ",".join(str(label) for label in self.labels) + "}"


@functools.lru_cache(maxsize=None)
def standard_ground(ell: int) -> GroundSet:
    """Returns the ground set [ℓ]."""
    if ell < 1:
        raise utils.InvalidArgumentError(f"Ground set size must be positive, got {ell}.")
    return GroundSet(tuple(range(1, ell + 1)))


def node_ground(marks: Iterable[int]) -> GroundSet:
    """Returns the ground set {nd} ⊔ marks."""
    return GroundSet(tuple(marks), has_node=True)


# **********************************************************
# Splittings.
# **********************************************************
def epsilon_masks(designated: int, other: int) -> int:
    """+1 if the smallest element of the union lies in `designated`, else -1."""
    union = designated | other
    if not union:
        raise utils.InvalidArgumentError("The sign is undefined on the empty splitting.")
    return 1 if union & -union & designated else -1


def _canonical_masks(first: int, second: int) -> Tuple[int, int]:
    union = first | second
    if union and not union & -union & first:
        return second, first
    return first, second


@attrs.frozen
class PartitionPair:
    """Unordered splitting {J,K} of a ground set with min(J∪K) in J."""

    ground: GroundSet
    J: int
    K: int

    def __str__(self) -> str:
        return f"{{{self.ground.render(self.J)}|{self.ground.render(self.K)}}}"


@attrs.frozen
class TriplePartition:
    """Splitting (I,{J,K}) of a ground set with min(J∪K) in J."""

    ground: GroundSet
    I: int
    J: int
    K: int

    def __str__(self) -> str:
        render = self.ground.render
        return f"{{{render(self.I)};{render(self.J)}|{render(self.K)}}}"


def canonical_pair(ground: GroundSet, A: Subset, B: Subset) -> PartitionPair:
    """Returns the canonical form of the splitting {A,B} of `ground`."""
    first, second = ground.mask(A), ground.mask(B)
    if first & second or first | second != ground.full:
        raise utils.InvalidPartitionError(
            ground, (ground.subset(first), ground.subset(second))
        )
    J, K = _canonical_masks(first, second)
    return PartitionPair(ground, J, K)


def canonical_triple(
    ground: GroundSet, I: Subset, A: Subset, B: Subset
) -> TriplePartition:
    """Returns the canonical form of (I,{A,B}); requires 1 ≤ |I| ≤ |ground| - 2."""
    inner, first, second = ground.mask(I), ground.mask(A), ground.mask(B)
    if (
        inner & first
        or inner & second
        or first & second
        or inner | first | second != ground.full
    ):
        raise utils.InvalidPartitionError(
            ground, (ground.subset(inner), ground.subset(first), ground.subset(second))
        )
    if not 1 <= popcount(inner) <= ground.size - 2:
        raise utils.InvalidPartitionError(
            ground,
            (ground.subset(inner), ground.subset(first), ground.subset(second)),
            f"the inner part needs 1 ≤ |I| ≤ {ground.size - 2}.",
        )
    J, K = _canonical_masks(first, second)
    return TriplePartition(ground, inner, J, K)


def epsilon(p: PartitionPair, designatedJ: Subset) -> int:
    """ε of the pair with `designatedJ` playing the role of J."""
    designated = p.ground.mask(designatedJ)
    if not p.J | p.K:
        raise utils.InvalidArgumentError("The sign is undefined on the empty splitting.")
    if designated == p.J:
        return epsilon_masks(p.J, p.K)
    if designated == p.K:
        return epsilon_masks(p.K, p.J)
    raise utils.InvalidArgumentError(
        f"{p.ground.subset(designated)} is not a part of {p}."
    )


def _preceq_masks(J: int, K: int, J2: int, K2: int) -> bool:
    return (is_subset(J, J2) and is_subset(K, K2)) or (
        is_subset(J, K2) and is_subset(K, J2)
    )


def _parts_as_labels(p) -> Tuple[FrozenSet[Label], FrozenSet[Label]]:
    return p.ground.label_set(p.J), p.ground.label_set(p.K)


def preceq(p, q) -> bool:
    """{J,K} ≼ {J',K'}; the pairs may live on different ground sets."""
    if p.ground == q.ground:
        return _preceq_masks(p.J, p.K, q.J, q.K)
    J, K = _parts_as_labels(p)
    J2, K2 = _parts_as_labels(q)
    return (J <= J2 and K <= K2) or (J <= K2 and K <= J2)


def parallel(p, q) -> bool:
    """{J,K} ∥ {J',K'}: neither pair refines the other."""
    return not preceq(p, q) and not preceq(q, p)


def _require_same_ground(p, q) -> None:
    if p.ground != q.ground:
        raise utils.InvalidArgumentError(
            f"Splittings live on different ground sets: {p.ground} and {q.ground}."
        )


def notcap_pair(p: PartitionPair, q: PartitionPair) -> bool:
    """{J,K} ∦∩ {J',K'} on a common ground set."""
    _require_same_ground(p, q)
    return not (
        is_subset(p.J, q.J)
        or is_subset(p.J, q.K)
        or is_subset(q.J, p.J)
        or is_subset(q.K, p.J)
    )


def notcap_triple(t: TriplePartition, u: TriplePartition) -> bool:
    """(I,{J,K}) ∦∩ (I',{J',K'}): the pairs are parallel and J⊔K ⊄ I'."""
    _require_same_ground(t, u)
    return parallel(t, u) and not is_subset(t.J | t.K, u.I)


# **********************************************************
# Enumeration of index sets.
# **********************************************************
def _submasks(mask: int) -> List[int]:
    result = []
    sub = mask
    while True:
        result.append(sub)
        if not sub:
            break
        sub = (sub - 1) & mask
    return result


def _splittings_of(rest: int) -> List[Tuple[int, int]]:
    if not rest:
        return [(0, 0)]
    low = rest & -rest
    return sorted((low | sub, rest ^ low ^ sub) for sub in _submasks(rest ^ low))


@functools.lru_cache(maxsize=None)
def partition_pairs(ground: GroundSet) -> Tuple[PartitionPair, ...]:
    """All classes of 𝒫(S), ordered by J."""
    return tuple(PartitionPair(ground, J, K) for J, K in _splittings_of(ground.full))


@functools.lru_cache(maxsize=None)
def bullet_pairs(ground: GroundSet) -> Tuple[PartitionPair, ...]:
    """Classes of 𝒫_•(S): both parts have at least two elements."""
    return tuple(
        p
        for p in partition_pairs(ground)
        if popcount(p.J) >= 2 and popcount(p.K) >= 2
    )


@functools.lru_cache(maxsize=None)
def bullet_triples(ground: GroundSet) -> Tuple[TriplePartition, ...]:
    """Classes of 𝒫̃_•(S), ordered by (I, J)."""
    result = []
    for inner in range(1, ground.full + 1):
        if not 1 <= popcount(inner) <= ground.size - 2:
            continue
        for J, K in _splittings_of(ground.full ^ inner):
            result.append(TriplePartition(ground, inner, J, K))
    return tuple(sorted(result, key=lambda t: (t.I, t.J)))


# **********************************************************
# Generators.
# **********************************************************
class GeneratorKind(enum.Enum):
    """Variants of ring generators; the value orders E before D."""

    REAL_E = 0
    COMPLEX_D = 1
    REAL_D = 2

    @property
    def degree(self) -> int:
        return 1 if self is GeneratorKind.REAL_E else 2


@attrs.frozen
class GeneratorId:
    """One boundary class used as a ring generator."""

    kind: GeneratorKind
    ground: GroundSet
    I: int
    J: int
    K: int

    @property
    def degree(self) -> int:
        return self.kind.degree

    @property
    def sort_key(self) -> Tuple[int, int, int, int]:
        return (self.degree, self.kind.value, self.I, self.J)

    @property
    def pair(self) -> PartitionPair:
        return PartitionPair(self.ground, self.J, self.K)

    @property
    def triple(self) -> TriplePartition:
        return TriplePartition(self.ground, self.I, self.J, self.K)

    @property
    def name(self) -> str:
        return generator_name(self)

    def __str__(self) -> str:
        return self.name


def complex_generator(p: PartitionPair) -> GeneratorId:
    """D_{J,K} for {J,K} in 𝒫_•."""
    if popcount(p.J) < 2 or popcount(p.K) < 2:
        raise utils.InvalidArgumentError(f"{p} is not a class of 𝒫_•({p.ground}).")
    return GeneratorId(GeneratorKind.COMPLEX_D, p.ground, 0, p.J, p.K)


def real_e_generator(p: PartitionPair) -> GeneratorId:
    """ℝE_{J,K} for {J,K} in 𝒫."""
    return GeneratorId(GeneratorKind.REAL_E, p.ground, 0, p.J, p.K)


def real_d_generator(t: TriplePartition) -> GeneratorId:
    """ℝD_{I;J,K} for (I,{J,K}) in 𝒫̃_•."""
    return GeneratorId(GeneratorKind.REAL_D, t.ground, t.I, t.J, t.K)


def generator_name(g: GeneratorId) -> str:
    """Renders E{J|K}, D{J|K} or D{I;J|K}."""
    render = g.ground.render
    if g.kind is GeneratorKind.REAL_E:
        return f"E{{{render(g.J)}|{render(g.K)}}}"
    if g.kind is GeneratorKind.COMPLEX_D:
        return f"D{{{render(g.J)}|{render(g.K)}}}"
    return f"D{{{render(g.I)};{render(g.J)}|{render(g.K)}}}"


def minimum_size(family: str) -> int:
    return 3 if check_family(family) == COMPLEX else 2


@functools.lru_cache(maxsize=None)
def enumerate_generators(family: str, ground: GroundSet) -> Tuple[GeneratorId, ...]:
    """All generators of the family's polynomial ring on `ground`, in generator order."""
    if ground.size < minimum_size(family):
        raise utils.InvalidArgumentError(
            f"The {family} family needs at least {minimum_size(family)} marks, "
            f"got {ground.size}."
        )
    if family == COMPLEX:
        gens = [complex_generator(p) for p in bullet_pairs(ground)]
    else:
        gens = [real_e_generator(p) for p in partition_pairs(ground)]
        gens.extend(real_d_generator(t) for t in bullet_triples(ground))
    return tuple(sorted(gens, key=lambda g: g.sort_key))


def relabel(g: GeneratorId, permutation: Mapping[Label, Label]) -> GeneratorId:
    """Applies a permutation of the marks to a generator and re-canonicalizes it."""
    ground = g.ground

    def _move(mask: int) -> int:
        return ground.mask(permutation.get(label, label) for label in ground.subset(mask))

    if g.kind is GeneratorKind.REAL_D:
        return real_d_generator(
            canonical_triple(ground, _move(g.I), _move(g.J), _move(g.K))
        )
    p = canonical_pair(ground, _move(g.J), _move(g.K))
    if g.kind is GeneratorKind.REAL_E:
        return real_e_generator(p)
    return complex_generator(p)
