"""Set families with unit block sums, and exact membership tests.

A family is a finite list of blocks: nonempty sets of integer labels
whose union forms the ground set.  A weight function maps labels to
rationals.  The central polytope consists of the nonnegative weight
functions whose sum over every block equals one ("stochastic"); the
substochastic relaxation allows sums at most one.  The 0/1-valued
members of the two polytopes are exact covers and packings of the
family.  All arithmetic is exact, via ``fractions.Fraction``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import (
    DuplicateBlockError,
    EmptyBlockError,
    EmptyFamilyError,
    InputError,
    InternalPropertyError,
    NotACoverError,
    NotStochasticError,
    UnknownElementError,
)

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class Block:
    """One block of a family: a stable index and its sorted members."""

    index: int
    members: tuple[int, ...]

    def __contains__(self, label: object) -> bool:
        return label in self.member_set

    @property
    def member_set(self) -> frozenset[int]:
        return frozenset(self.members)

    @property
    def size(self) -> int:
        return len(self.members)


@dataclass(frozen=True, eq=False)
class SetFamily:
    """An indexed family of blocks together with its membership index.

    ``gamma`` maps each ground element to the sorted tuple of indices of
    the blocks containing it (never empty).  Block indices are positive
    and strictly increasing along ``blocks`` but need not be contiguous:
    reductions keep the surviving blocks' original indices.
    """

    blocks: tuple[Block, ...]
    ground: tuple[int, ...]
    gamma: dict[int, tuple[int, ...]]

    def block(self, index: int) -> Block:
        b = self._by_index.get(index)
        if b is None:
            raise InputError(f"no block with index {index}")
        return b

    @property
    def _by_index(self) -> dict[int, Block]:
        cached = self.__dict__.get("_by_index_cache")
        if cached is None:
            cached = {b.index: b for b in self.blocks}
            self.__dict__["_by_index_cache"] = cached
        return cached

    @property
    def block_indices(self) -> tuple[int, ...]:
        return tuple(b.index for b in self.blocks)

    @property
    def ground_set(self) -> frozenset[int]:
        return frozenset(self.ground)

    def membership(self, label: int) -> tuple[int, ...]:
        got = self.gamma.get(label)
        if got is None:
            raise UnknownElementError(f"label {label} is not in the ground set")
        return got

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"SetFamily({len(self.blocks)} blocks, {len(self.ground)} elements)"


def _assemble(indexed_blocks: list[tuple[int, tuple[int, ...]]]) -> SetFamily:
    """Build a SetFamily from (index, sorted members) pairs, validated."""
    if not indexed_blocks:
        raise EmptyFamilyError("a family needs at least one block")
    seen: dict[frozenset[int], int] = {}
    blocks = []
    gamma: dict[int, list[int]] = {}
    for index, members in indexed_blocks:
        if not members:
            raise EmptyBlockError(f"block {index} is empty")
        key = frozenset(members)
        if len(key) != len(members):
            raise InputError(f"block {index} repeats a member")
        if key in seen:
            raise DuplicateBlockError(
                f"blocks {seen[key]} and {index} have identical members"
            )
        seen[key] = index
        blocks.append(Block(index=index, members=members))
        for g in members:
            gamma.setdefault(g, []).append(index)
    ground = tuple(sorted(gamma))
    return SetFamily(
        blocks=tuple(blocks),
        ground=ground,
        gamma={g: tuple(ks) for g, ks in gamma.items()},
    )


def build_family(
    blocks: Iterable[Iterable[int]], ground: Iterable[int] | None = None
) -> SetFamily:
    """Create a family from member lists, indexing blocks 1, 2, ... in order.

    Labels must be nonnegative integers.  When ``ground`` is given it must
    equal the union of the blocks; elements outside every block would
    violate the covering invariant and are rejected.
    """
    indexed = []
    for pos, raw in enumerate(blocks, start=1):
        members = []
        for g in raw:
            if isinstance(g, bool) or not isinstance(g, int):
                raise InputError(f"label {g!r} in block {pos} is not an integer")
            if g < 0:
                raise InputError(f"label {g} in block {pos} is negative")
            members.append(g)
        indexed.append((pos, tuple(sorted(members))))
    family = _assemble(indexed)
    if ground is not None:
        declared = set()
        for g in ground:
            if isinstance(g, bool) or not isinstance(g, int) or g < 0:
                raise InputError(f"ground label {g!r} is not a nonnegative integer")
            declared.add(g)
        union = set(family.ground)
        if declared - union:
            extra = sorted(declared - union)[:5]
            raise InputError(f"ground labels {extra} belong to no block")
        if union - declared:
            missing = sorted(union - declared)[:5]
            raise InputError(f"block members {missing} are missing from ground")
    return family


def multiplicity(family: SetFamily, label: int) -> int:
    """Number of blocks containing ``label``."""
    return len(family.membership(label))


def max_multiplicity(family: SetFamily) -> int:
    """Largest multiplicity over the ground set."""
    return max(len(ks) for ks in family.gamma.values())


def _as_fraction(value: object) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise InputError(f"weight value {value!r} is not rational")
    if isinstance(value, int):
        return Fraction(value)
    raise InputError(f"weight value {value!r} is not rational")


class WeightFunction:
    """A finitely supported map from labels to exact rationals.

    Zero values are dropped, so two functions are equal exactly when they
    agree everywhere.  Values may be negative; the membership classifier
    reports on nonnegativity rather than forbidding it.
    """

    __slots__ = ("_items", "_map")

    def __init__(self, mapping: Mapping[int, object] | Iterable[tuple[int, object]]):
        pairs = mapping.items() if isinstance(mapping, Mapping) else mapping
        cleaned: dict[int, Fraction] = {}
        for g, v in pairs:
            if isinstance(g, bool) or not isinstance(g, int):
                raise InputError(f"weight label {g!r} is not an integer")
            value = _as_fraction(v)
            if g in cleaned:
                raise InputError(f"label {g} appears twice")
            if value != 0:
                cleaned[g] = value
        self._map = cleaned
        self._items = tuple(sorted(cleaned.items()))

    @classmethod
    def zero(cls) -> "WeightFunction":
        return cls({})

    def value(self, label: int) -> Fraction:
        return self._map.get(label, ZERO)

    __call__ = value

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(g for g, _ in self._items)

    def items(self) -> tuple[tuple[int, Fraction], ...]:
        return self._items

    def total(self) -> Fraction:
        return sum((v for _, v in self._items), start=ZERO)

    @property
    def nonnegative(self) -> bool:
        return all(v > 0 for _, v in self._items)

    @property
    def zero_one(self) -> bool:
        return all(v == 1 for _, v in self._items)

    def restrict(self, labels: Iterable[int]) -> "WeightFunction":
        keep = set(labels)
        return WeightFunction({g: v for g, v in self._items if g in keep})

    def __add__(self, other: "WeightFunction") -> "WeightFunction":
        merged = dict(self._map)
        for g, v in other._items:
            merged[g] = merged.get(g, ZERO) + v
        return WeightFunction(merged)

    def __sub__(self, other: "WeightFunction") -> "WeightFunction":
        return self + other.scaled(-1)

    def scaled(self, factor: object) -> "WeightFunction":
        c = _as_fraction(factor)
        return WeightFunction({g: c * v for g, v in self._items})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, WeightFunction):
            return NotImplemented
        return self._items == other._items

    def __hash__(self) -> int:
        return hash(self._items)

    def sort_key(self) -> tuple:
        return tuple((g, v.numerator, v.denominator) for g, v in self._items)

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        body = ", ".join(f"{g}: {v}" for g, v in self._items)
        return f"WeightFunction({{{body}}})"


@dataclass(frozen=True)
class MembershipReport:
    """Block sums and the four membership flags for one weight function.

    A negative value anywhere forces all four flags to False; the block
    sums are still reported.
    """

    block_sums: tuple[tuple[int, Fraction], ...]
    nonnegative: bool
    stochastic: bool
    substochastic: bool
    exact_cover: bool
    packing: bool

    def block_sum(self, index: int) -> Fraction:
        for k, s in self.block_sums:
            if k == index:
                return s
        raise InputError(f"no block with index {index}")


def block_sum(family: SetFamily, w: WeightFunction, index: int) -> Fraction:
    return sum((w.value(g) for g in family.block(index).members), start=ZERO)


def classify_membership(family: SetFamily, w: WeightFunction) -> MembershipReport:
    """Classify ``w`` against the stochastic and substochastic polytopes."""
    ground = family.ground_set
    for g in w.support:
        if g not in ground:
            raise UnknownElementError(f"support label {g} is not in the ground set")
    sums = tuple((b.index, block_sum(family, w, b.index)) for b in family.blocks)
    nonneg = w.nonnegative
    all_one = all(s == 1 for _, s in sums)
    all_at_most_one = all(s <= 1 for _, s in sums)
    zero_one = w.zero_one
    return MembershipReport(
        block_sums=sums,
        nonnegative=nonneg,
        stochastic=nonneg and all_one,
        substochastic=nonneg and all_at_most_one,
        exact_cover=nonneg and all_one and zero_one,
        packing=nonneg and all_at_most_one and zero_one,
    )


def require_stochastic(family: SetFamily, w: WeightFunction) -> MembershipReport:
    """Return the membership report, or raise if ``w`` is not stochastic."""
    report = classify_membership(family, w)
    if not report.stochastic:
        if not report.nonnegative:
            raise NotStochasticError("weight function takes a negative value")
        bad, total = next((k, s) for k, s in report.block_sums if s != 1)
        raise NotStochasticError(f"block {bad} sums to {total}")
    return report


@dataclass(frozen=True)
class CountingIdentity:
    """The exact count identity: block count equals multiplicity-weighted mass."""

    block_count: int
    weighted_mass: Fraction
    bound: Fraction

    @property
    def holds(self) -> bool:
        return self.block_count == self.weighted_mass

    @property
    def bounded(self) -> bool:
        return self.weighted_mass <= self.bound


def counting_identity(family: SetFamily, w: WeightFunction) -> CountingIdentity:
    """Evaluate the counting identity for a stochastic ``w``.

    Summing all block sums of a stochastic function counts each element
    once per block containing it, so the number of blocks equals the
    multiplicity-weighted total mass, which is at most the maximal
    multiplicity times the plain total mass.
    """
    require_stochastic(family, w)
    lhs = len(family.blocks)
    rhs = sum(
        (Fraction(multiplicity(family, g)) * v for g, v in w.items()), start=ZERO
    )
    bound = Fraction(max_multiplicity(family)) * w.total()
    result = CountingIdentity(block_count=lhs, weighted_mass=rhs, bound=bound)
    if not result.holds or not result.bounded:
        raise InternalPropertyError(
            f"counting identity failed: {lhs} vs {rhs} (bound {bound})"
        )
    return result


@dataclass(frozen=True)
class EmptinessVerdict:
    """Outcome of the block-counting emptiness test."""

    certified_empty: bool
    block_count: int
    cover_size: int
    max_multiplicity: int

    @property
    def threshold(self) -> int:
        return self.cover_size * self.max_multiplicity


def emptiness_test(family: SetFamily, cover: Iterable[int]) -> EmptinessVerdict:
    """Certify emptiness of the stochastic polytope by counting blocks.

    ``cover`` lists indices of blocks that jointly contain every ground
    element.  Each element then carries multiplicity at most the family
    maximum, so a stochastic function would force the block count to be
    at most ``len(cover) * max_multiplicity``.  A strictly larger block
    count certifies that no stochastic function exists.  Anything else is
    inconclusive.
    """
    indices = list(dict.fromkeys(cover))
    covered: set[int] = set()
    for k in indices:
        covered.update(family.block(k).members)
    if covered != set(family.ground):
        missing = sorted(set(family.ground) - covered)[:5]
        raise NotACoverError(f"cover misses elements {missing}")
    kappa = max_multiplicity(family)
    verdict = EmptinessVerdict(
        certified_empty=len(family.blocks) > len(indices) * kappa,
        block_count=len(family.blocks),
        cover_size=len(indices),
        max_multiplicity=kappa,
    )
    return verdict


@dataclass(frozen=True)
class RemovalLog:
    """What ``normalize`` removed: (superset index, witness subset index)
    pairs in removal order, plus the elements dropped from the ground set."""

    removed_blocks: tuple[tuple[int, int], ...]
    removed_elements: tuple[int, ...]


def normalize(family: SetFamily) -> tuple[SetFamily, RemovalLog]:
    """Remove blocks that contain another block, keeping membership intact.

    While some block is a strict superset of another, the superset is
    removed (a stochastic function sums to one on the subset, so the
    superset's extra elements are forced to zero) and elements left in no
    surviving block are dropped.  Deterministic: the smallest superset
    index is removed first, witnessed by the smallest subset index.  The
    result is idempotent, and restriction to the reduced ground set is a
    bijection between the two stochastic polytopes.
    """
    alive: dict[int, frozenset[int]] = {b.index: b.member_set for b in family.blocks}
    removed: list[tuple[int, int]] = []
    while True:
        hit = None
        for j in sorted(alive):
            for k in sorted(alive):
                if k != j and alive[k] <= alive[j]:
                    hit = (j, k)
                    break
            if hit:
                break
        if hit is None:
            break
        j, k = hit
        del alive[j]
        removed.append((j, k))
    kept_elements: set[int] = set()
    for members in alive.values():
        kept_elements.update(members)
    removed_elements = tuple(sorted(set(family.ground) - kept_elements))
    reduced = _assemble(
        [(idx, tuple(sorted(alive[idx]))) for idx in sorted(alive)]
    )
    return reduced, RemovalLog(tuple(removed), removed_elements)


def saturate(
    family: SetFamily, equality: Iterable[int]
) -> tuple[SetFamily, dict[int, int]]:
    """Append a fresh slack element to every block outside ``equality``.

    The substochastic polytope with equality required only on the listed
    blocks is in affine bijection with the stochastic polytope of the
    returned family: the slack of a block absorbs its deficit.  Returns
    the enlarged family and the map from relaxed block index to its slack
    label.  Slack labels start just above the current ground set, in
    block-index order.
    """
    eq = set(equality)
    for k in eq:
        family.block(k)
    next_label = max(family.ground) + 1
    slack_of: dict[int, int] = {}
    indexed = []
    for b in family.blocks:
        if b.index in eq:
            indexed.append((b.index, b.members))
        else:
            slack_of[b.index] = next_label
            indexed.append((b.index, tuple(sorted(b.members + (next_label,)))))
            next_label += 1
    return _assemble(indexed), slack_of


def check_injectivity(
    family: SetFamily, subset: Iterable[int] | None = None
) -> tuple[int, int] | None:
    """Find two distinct labels lying in exactly the same blocks.

    Returns the lexicographically first offending pair within ``subset``
    (default: the whole ground set), or None when the membership map is
    injective there.
    """
    labels = sorted(set(subset)) if subset is not None else list(family.ground)
    seen: dict[tuple[int, ...], int] = {}
    best: tuple[int, int] | None = None
    for g in labels:
        key = family.membership(g)
        if key in seen:
            pair = (seen[key], g)
            if best is None or pair < best:
                best = pair
        else:
            seen[key] = g
    return best


@dataclass(frozen=True)
class FreshnessVerdict:
    """Whether fresh elements stay reachable beyond the first ``m`` blocks.

    Either the first ``m`` blocks already cover the ground set
    (``mode == "cover"``), or no later block may lie inside the union of
    the other blocks (``mode == "fresh"``).  ``violations`` lists the
    absorbed block indices when the check fails.
    """

    ok: bool
    mode: str | None
    m: int
    violations: tuple[int, ...] = ()
    horizon_limited: bool = False


def check_freshness(family: SetFamily, m: int) -> FreshnessVerdict:
    """Check the covering-or-fresh-elements condition exhaustively.

    For a finite family, containment in a union of finitely many other
    blocks is equivalent to containment in the union of all other blocks,
    so the check is a plain subset test per block beyond position ``m``.
    """
    if m < 0 or m > len(family.blocks):
        raise InputError(f"m must lie in [0, {len(family.blocks)}]")
    first = family.blocks[:m]
    covered: set[int] = set()
    for b in first:
        covered.update(b.members)
    if covered == set(family.ground):
        return FreshnessVerdict(ok=True, mode="cover", m=m)
    violations = []
    for b in family.blocks[m:]:
        rest: set[int] = set()
        for other in family.blocks:
            if other.index != b.index:
                rest.update(other.members)
        if b.member_set <= rest:
            violations.append(b.index)
    if violations:
        return FreshnessVerdict(
            ok=False, mode=None, m=m, violations=tuple(violations)
        )
    return FreshnessVerdict(ok=True, mode="fresh", m=m)
