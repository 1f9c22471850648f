"""Finite-horizon completion of partially assigned weight functions.

A generator describes a family with unboundedly many blocks through
pure functions on indices and labels.  A truncation fixes weights whose
support lies inside the first ``n`` blocks, summing to one on each of
those and to at most one beyond.  The completion walks the remaining
blocks in order and places one fresh element per unsaturated block,
carrying exactly the missing amount, so that every block visited within
the horizon ends at sum one.  The new values are dominated by two 0/1
packing patterns, which is what keeps the construction inside the
original polytope.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import count, islice
from math import isqrt
from typing import Iterator, Protocol

from .errors import (
    GeneratorInconsistentError,
    HorizonExhaustedError,
    InputError,
    InternalPropertyError,
    NotStochasticError,
)
from .family import Block, SetFamily, WeightFunction, build_family
from .oracle import Decomposition, decompose


class FamilyGenerator(Protocol):
    """A lazily evaluated family of blocks over positive integer labels.

    ``block_count`` is ``None`` for unbounded families.  ``fresh_start``
    is the position after which every block keeps elements outside any
    finite exploration that follows ascending block order;
    ``claims_fresh_supply`` states that promise.  All methods must be
    pure and deterministic.
    """

    name: str
    block_count: int | None
    fresh_start: int
    claims_fresh_supply: bool

    def block_size(self, k: int) -> int | None:
        """Number of elements of block ``k``, or ``None`` if unbounded."""

    def block_elements(self, k: int) -> Iterator[int]:
        """Elements of block ``k`` in ascending label order."""

    def block_at(self, k: int) -> Block:
        """Block ``k`` materialized; only finite blocks support this."""

    def gamma_of(self, g: int) -> tuple[int, ...]:
        """Sorted indices of every block containing ``g`` (always finite)."""

    def contains(self, k: int, g: int) -> bool:
        """Whether block ``k`` contains label ``g``."""


def _check_index(k: int, block_count: int | None) -> None:
    if k < 1 or (block_count is not None and k > block_count):
        raise InputError(f"block index {k} is out of range")


class PathGenerator:
    """Blocks {k, k+1}: consecutive overlapping pairs along a ray."""

    name = "path"
    block_count: int | None = None
    fresh_start = 0
    claims_fresh_supply = True

    def block_size(self, k: int) -> int | None:
        _check_index(k, None)
        return 2

    def block_elements(self, k: int) -> Iterator[int]:
        _check_index(k, None)
        return iter((k, k + 1))

    def block_at(self, k: int) -> Block:
        _check_index(k, None)
        return Block(index=k, members=(k, k + 1))

    def gamma_of(self, g: int) -> tuple[int, ...]:
        if g < 1:
            raise InputError(f"label {g} is not positive")
        return (1,) if g == 1 else (g - 1, g)

    def contains(self, k: int, g: int) -> bool:
        _check_index(k, None)
        return g in (k, k + 1)


class DisjointGrowingGenerator:
    """Pairwise disjoint blocks of sizes 1, 2, 3, ... in label order."""

    name = "disjoint-growing"
    block_count: int | None = None
    fresh_start = 0
    claims_fresh_supply = True

    def block_size(self, k: int) -> int | None:
        _check_index(k, None)
        return k

    def block_elements(self, k: int) -> Iterator[int]:
        _check_index(k, None)
        start = k * (k - 1) // 2 + 1
        return iter(range(start, start + k))

    def block_at(self, k: int) -> Block:
        return Block(index=k, members=tuple(self.block_elements(k)))

    def gamma_of(self, g: int) -> tuple[int, ...]:
        if g < 1:
            raise InputError(f"label {g} is not positive")
        return ((isqrt(8 * g - 7) + 1) // 2,)

    def contains(self, k: int, g: int) -> bool:
        _check_index(k, None)
        start = k * (k - 1) // 2 + 1
        return start <= g < start + k


class GridGenerator:
    """Rows and columns of an unbounded matrix, interleaved.

    Cell (r, c) gets the diagonal label (r+c-2)(r+c-1)/2 + r.  Block
    2r-1 is row r and block 2c is column c, so every label lies in
    exactly two blocks and the blocks are unbounded.
    """

    name = "grid"
    block_count: int | None = None
    fresh_start = 0
    claims_fresh_supply = True

    @staticmethod
    def label(r: int, c: int) -> int:
        if r < 1 or c < 1:
            raise InputError("matrix coordinates start at one")
        d = r + c - 2
        return d * (d + 1) // 2 + r

    @staticmethod
    def cell(g: int) -> tuple[int, int]:
        if g < 1:
            raise InputError(f"label {g} is not positive")
        s = g - 1
        d = (isqrt(8 * s + 1) - 1) // 2
        r = s - d * (d + 1) // 2 + 1
        return r, d - r + 2

    def block_size(self, k: int) -> int | None:
        _check_index(k, None)
        return None

    def block_elements(self, k: int) -> Iterator[int]:
        _check_index(k, None)
        if k % 2 == 1:
            r = (k + 1) // 2
            return (self.label(r, c) for c in count(1))
        c = k // 2
        return (self.label(r, c) for r in count(1))

    def block_at(self, k: int) -> Block:
        raise InputError(f"block {k} is unbounded and cannot be materialized")

    def gamma_of(self, g: int) -> tuple[int, ...]:
        r, c = self.cell(g)
        return tuple(sorted((2 * r - 1, 2 * c)))

    def contains(self, k: int, g: int) -> bool:
        _check_index(k, None)
        r, c = self.cell(g)
        return k == 2 * r - 1 or k == 2 * c


class WrappedFamilyGenerator:
    """A finite family exposed through the generator interface.

    The completion loop treats it in exhaustion mode: once every block
    is saturated the walk simply stops, so no fresh-supply promise is
    made.
    """

    claims_fresh_supply = False
    fresh_start = 0

    def __init__(self, family: SetFamily, name: str = "wrapped"):
        self._family = family
        self.name = name
        self.block_count: int | None = len(family.blocks)

    def block_size(self, k: int) -> int | None:
        return self._family.block(k).size

    def block_elements(self, k: int) -> Iterator[int]:
        return iter(self._family.block(k).members)

    def block_at(self, k: int) -> Block:
        return self._family.block(k)

    def gamma_of(self, g: int) -> tuple[int, ...]:
        return self._family.membership(g)

    def contains(self, k: int, g: int) -> bool:
        return g in self._family.block(k).member_set


_BUILTIN_GENERATORS = {
    PathGenerator.name: PathGenerator,
    DisjointGrowingGenerator.name: DisjointGrowingGenerator,
    GridGenerator.name: GridGenerator,
}


def get_generator(name: str) -> FamilyGenerator:
    """Look up a built-in generator by name."""
    try:
        return _BUILTIN_GENERATORS[name]()
    except KeyError:
        known = ", ".join(sorted(_BUILTIN_GENERATORS))
        raise InputError(f"unknown generator {name!r}; known: {known}") from None


@dataclass(frozen=True)
class Truncation:
    """Weights assigned inside the union of the first ``n`` blocks."""

    n: int
    w: WeightFunction


def _touched_sums(
    generator: FamilyGenerator, w: WeightFunction
) -> dict[int, Fraction]:
    """Block sums of ``w`` over every block meeting its support."""
    sums: dict[int, Fraction] = {}
    for g, value in w.items():
        for k in generator.gamma_of(g):
            if not generator.contains(k, g):
                raise GeneratorInconsistentError(
                    f"gamma_of({g}) lists block {k} but contains({k}, {g})"
                    " is false"
                )
            sums[k] = sums.get(k, Fraction(0)) + value
    return sums


def validate_truncation(generator: FamilyGenerator, trunc: Truncation) -> None:
    """Raise unless the truncation is a valid partial assignment.

    The support must lie inside the first ``n`` blocks, values must be
    nonnegative, blocks up to ``n`` must sum to exactly one, and every
    later block meeting the support must sum to at most one.
    """
    if trunc.n < 1:
        raise InputError("the truncation depth must be positive")
    if generator.block_count is not None and trunc.n > generator.block_count:
        raise InputError(
            f"truncation depth {trunc.n} exceeds the {generator.block_count}"
            " available blocks"
        )
    if not trunc.w.nonnegative:
        raise InputError("truncation weights must be nonnegative")
    for g in trunc.w.support:
        gamma = generator.gamma_of(g)
        if not gamma:
            raise InputError(f"element {g} lies in no block")
        if min(gamma) > trunc.n:
            raise InputError(
                f"element {g} lies outside the first {trunc.n} blocks"
            )
    sums = _touched_sums(generator, trunc.w)
    for k in range(1, trunc.n + 1):
        total = sums.get(k, Fraction(0))
        if total != 1:
            raise NotStochasticError(f"block {k} sums to {total}, expected 1")
    for k, total in sorted(sums.items()):
        if k > trunc.n and total > 1:
            raise NotStochasticError(f"block {k} sums to {total} > 1")


def tail_sums(
    generator: FamilyGenerator, trunc: Truncation, horizon: int
) -> tuple[Fraction, ...]:
    """Partial sums the truncation already contributes to later blocks.

    Entry ``j`` (for ``j`` from ``n+1`` to ``horizon``) is the sum of
    the assigned weights inside block ``j``.  Once ``j`` exceeds every
    block index meeting the support the entries are zero and stay zero,
    which is asserted.
    """
    validate_truncation(generator, trunc)
    if horizon < trunc.n:
        raise InputError("the horizon must not precede the truncation depth")
    sums = _touched_sums(generator, trunc.w)
    last_touched = max(sums, default=0)
    out = []
    for j in range(trunc.n + 1, horizon + 1):
        value = sums.get(j, Fraction(0))
        if j > last_touched and value != 0:
            raise InternalPropertyError("tail sums failed to vanish")
        out.append(value)
    return tuple(out)


@dataclass(frozen=True)
class ChosenStep:
    """One completion step: ``element`` put into block ``block_index``.

    ``value`` is the amount assigned, ``pattern`` names the 0/1 packing
    ("a" or "b") dominating the element, and ``overlap_with`` is the one
    earlier chosen element sharing a block, if any.
    """

    element: int
    block_index: int
    value: Fraction
    pattern: str
    overlap_with: int | None


@dataclass(frozen=True)
class ExtensionResult:
    """A completed weight function together with its construction trace."""

    n: int
    horizon: int
    extended: WeightFunction
    steps: tuple[ChosenStep, ...]
    packing_a: WeightFunction
    packing_b: WeightFunction
    complete: bool

    @property
    def chosen_elements(self) -> tuple[int, ...]:
        return tuple(step.element for step in self.steps)


def _eligible(
    others: tuple[int, ...],
    delta: dict[int, Fraction],
    bound: Fraction,
    claimed: set[int],
) -> bool:
    for k in others:
        if k in claimed:
            return False
        current = delta.get(k, Fraction(0))
        if bound > 0:
            if current >= bound:
                return False
        elif current != 0:
            return False
    return True


def extend_truncation(
    generator: FamilyGenerator,
    trunc: Truncation,
    horizon: int,
    scan_limit: int = 4096,
) -> ExtensionResult:
    """Complete a truncation to block sums of one, one element at a time.

    Repeatedly take the least-index unsaturated block, find the least
    fresh label in it whose other blocks each carry strictly less than
    the missing amount (exactly zero when the missing amount is one) and
    avoid every block already saturated or already met by an earlier
    chosen element, and assign it the missing amount.  The walk stops at
    the horizon, or earlier when a bounded family is exhausted.  A block
    offering no eligible label within ``scan_limit`` inspected elements
    raises ``HorizonExhaustedError`` rather than being skipped.
    """
    validate_truncation(generator, trunc)
    if horizon <= trunc.n:
        raise InputError("the horizon must exceed the truncation depth")
    if scan_limit < 1:
        raise InputError("scan_limit must be positive")
    if not generator.claims_fresh_supply and generator.block_count is None:
        raise InputError(
            "an unbounded generator must promise fresh elements in"
            " every block"
        )
    if trunc.n < generator.fresh_start:
        raise InputError(
            f"the truncation depth must reach {generator.fresh_start},"
            " where the generator's fresh supply begins"
        )
    delta = _touched_sums(generator, trunc.w)
    for total in delta.values():
        if total > 1:
            raise NotStochasticError("a block sum exceeds one")
    claimed = {k for k, total in delta.items() if total == 1}
    values = dict(trunc.w.items())
    assigned: set[int] = set()
    steps: list[ChosenStep] = []
    prior_gammas: list[tuple[int, frozenset[int], str]] = []
    last_block = horizon
    if generator.block_count is not None:
        last_block = min(horizon, generator.block_count)

    cursor = trunc.n + 1
    while True:
        while cursor <= last_block and delta.get(cursor, Fraction(0)) == 1:
            cursor += 1
        if cursor > last_block:
            complete = True
            break
        k_j = cursor
        need = 1 - delta.get(k_j, Fraction(0))
        if need <= 0:
            raise InternalPropertyError("an unsaturated block lacks headroom")
        chosen = None
        scanned = 0
        for g in islice(generator.block_elements(k_j), scan_limit):
            scanned += 1
            gamma = generator.gamma_of(g)
            if k_j not in gamma:
                raise GeneratorInconsistentError(
                    f"block {k_j} yields label {g} outside gamma_of({g})"
                )
            if g in assigned or min(gamma) <= trunc.n:
                continue
            others = tuple(k for k in gamma if k != k_j)
            if _eligible(others, delta, 1 - need, claimed):
                chosen = (g, gamma)
                break
        if chosen is None:
            size = generator.block_size(k_j)
            if size is not None and scanned >= size:
                detail = "no fresh eligible element exists"
            else:
                detail = f"none found among the first {scanned} elements"
            raise HorizonExhaustedError(
                f"block {k_j} cannot be saturated: {detail}"
            )
        g_j, gamma = chosen
        overlaps = [
            (elem, pattern)
            for elem, gset, pattern in prior_gammas
            if gset & set(gamma)
        ]
        if len(overlaps) > 1:
            raise InternalPropertyError(
                f"element {g_j} meets {len(overlaps)} earlier chosen elements"
            )
        if overlaps:
            overlap_with, other_pattern = overlaps[0]
            pattern = "a" if other_pattern == "b" else "b"
        else:
            overlap_with, pattern = None, "a"
        for k in gamma:
            if not generator.contains(k, g_j):
                raise GeneratorInconsistentError(
                    f"gamma_of({g_j}) lists block {k} but contains({k}, {g_j})"
                    " is false"
                )
            new_total = delta.get(k, Fraction(0)) + need
            if new_total > 1:
                raise InternalPropertyError(
                    f"block {k} overflows to {new_total} at element {g_j}"
                )
            delta[k] = new_total
            if new_total == 1:
                claimed.add(k)
        values[g_j] = need
        assigned.add(g_j)
        prior_gammas.append((g_j, frozenset(gamma), pattern))
        steps.append(
            ChosenStep(
                element=g_j,
                block_index=k_j,
                value=need,
                pattern=pattern,
                overlap_with=overlap_with,
            )
        )

    extended = WeightFunction(values)
    packing_a = WeightFunction(
        {s.element: Fraction(1) for s in steps if s.pattern == "a"}
    )
    packing_b = WeightFunction(
        {s.element: Fraction(1) for s in steps if s.pattern == "b"}
    )
    result = ExtensionResult(
        n=trunc.n,
        horizon=horizon,
        extended=extended,
        steps=tuple(steps),
        packing_a=packing_a,
        packing_b=packing_b,
        complete=complete,
    )
    report = verify_extension(result, generator, trunc)
    if report.violations:
        raise InternalPropertyError(
            "the completed function fails its own checks: "
            + "; ".join(report.violations)
        )
    return result


@dataclass(frozen=True)
class ExtensionReport:
    """Independent re-checks of an ExtensionResult.

    ``vertex_input`` is whether the truncation was extreme in its own
    truncated polytope (None when not determined), ``vertex_shadow``
    whether the completion stays extreme on the finite sub-family of
    saturated blocks over its support.
    """

    violations: tuple[str, ...]
    vertex_input: bool | None
    vertex_shadow: bool | None

    @property
    def ok(self) -> bool:
        return not self.violations


def _support_rank(
    columns: tuple[int, ...],
    rows: list[frozenset[int]],
) -> int:
    from .oracle import _rank

    matrix = [
        [Fraction(1) if g in row else Fraction(0) for g in columns]
        for row in rows
    ]
    return _rank(matrix)


def verify_extension(
    result: ExtensionResult,
    generator: FamilyGenerator,
    trunc: Truncation,
) -> ExtensionReport:
    """Re-check a completion from scratch, reporting every violation.

    Checks: the completion agrees with the truncation except on the
    chosen elements, each carrying a positive value outside the first
    ``n`` blocks; block sums are one on the blocks the walk saturated
    and never exceed one; each chosen element meets at most one earlier
    one; the added values are dominated by the two packing patterns,
    each 0/1-valued with block sums at most one.  When the truncation is
    extreme in the truncated polytope, the completion must stay extreme
    on the finite sub-family of saturated blocks over its support.
    """
    violations: list[str] = []
    base = trunc.w
    chosen = {s.element: s for s in result.steps}
    if len(chosen) != len(result.steps):
        violations.append("a chosen element repeats")
    diff = result.extended - base
    for g, value in diff.items():
        step = chosen.get(g)
        if step is None:
            violations.append(f"element {g} changed without a recorded step")
        elif value != step.value or value <= 0:
            violations.append(f"element {g} carries {value}, not its step value")
    for g, step in chosen.items():
        if diff.value(g) != step.value:
            violations.append(f"step at {g} left no trace in the completion")
        gamma = generator.gamma_of(g)
        if min(gamma) <= trunc.n:
            violations.append(f"chosen element {g} is not fresh")
        if step.block_index not in gamma:
            violations.append(
                f"chosen element {g} lies outside block {step.block_index}"
            )

    sums = _touched_sums(generator, result.extended)
    last_block = result.horizon
    if generator.block_count is not None:
        last_block = min(result.horizon, generator.block_count)
    for k, total in sorted(sums.items()):
        if total > 1:
            violations.append(f"block {k} sums to {total} > 1")
    must_saturate = set(range(1, trunc.n + 1))
    must_saturate.update(s.block_index for s in result.steps)
    if result.complete:
        must_saturate.update(range(trunc.n + 1, last_block + 1))
    for k in sorted(must_saturate):
        total = sums.get(k, Fraction(0))
        if total != 1:
            violations.append(f"block {k} sums to {total}, expected 1")

    gammas = [
        (s.element, frozenset(generator.gamma_of(s.element)))
        for s in result.steps
    ]
    for j, (gj, gset_j) in enumerate(gammas):
        met = [gi for gi, gset_i in gammas[:j] if gset_i & gset_j]
        if len(met) > 1:
            violations.append(f"element {gj} meets {len(met)} earlier elements")
        recorded = chosen[gj].overlap_with
        if met and recorded not in met:
            violations.append(f"element {gj} records the wrong overlap")
        if not met and recorded is not None:
            violations.append(f"element {gj} records a phantom overlap")

    for name, packing in (("a", result.packing_a), ("b", result.packing_b)):
        if not packing.zero_one:
            violations.append(f"packing {name} is not 0/1-valued")
        packing_sums = _touched_sums(generator, packing)
        for k, total in sorted(packing_sums.items()):
            if total > 1:
                violations.append(
                    f"packing {name} puts {total} > 1 into block {k}"
                )
    cover = result.packing_a + result.packing_b
    for g, value in diff.items():
        if value > cover.value(g):
            violations.append(f"added value at {g} exceeds the packing cover")

    saturated_rows = [
        frozenset(
            g
            for g in result.extended.support
            if generator.contains(k, g)
        )
        for k, total in sorted(sums.items())
        if total == 1
    ]
    base_rows = [
        frozenset(g for g in base.support if generator.contains(k, g))
        for k, total in sorted(_touched_sums(generator, base).items())
        if total == 1 or k <= trunc.n
    ]
    base_support = base.support
    vertex_input = _support_rank(base_support, base_rows) == len(base_support)
    vertex_shadow: bool | None = None
    if vertex_input:
        full_support = result.extended.support
        vertex_shadow = (
            _support_rank(full_support, saturated_rows) == len(full_support)
        )
        if not vertex_shadow:
            violations.append(
                "an extreme truncation completed to a non-extreme function"
            )
    return ExtensionReport(
        violations=tuple(violations),
        vertex_input=vertex_input,
        vertex_shadow=vertex_shadow,
    )


@dataclass(frozen=True)
class ApproximationReport:
    """Exact gaps between a target function and a convex recombination."""

    n: int
    horizon: int
    block_discrepancy: dict[int, Fraction]
    element_discrepancy: dict[int, Fraction]
    combined: WeightFunction

    def max_block_discrepancy(self, up_to: int | None = None) -> Fraction:
        bound = self.horizon if up_to is None else up_to
        gaps = [d for k, d in self.block_discrepancy.items() if k <= bound]
        return max(gaps, default=Fraction(0))


def approximate_by_extremes(
    generator: FamilyGenerator,
    w_full: WeightFunction,
    n: int,
    horizon: int,
) -> tuple[Decomposition, ApproximationReport]:
    """Approximate a fully stochastic function by completed extremes.

    The function is restricted to the first ``n`` blocks, decomposed
    into extreme points of the truncated polytope (inequality blocks get
    slack elements), and each extreme point is completed through
    ``extend_truncation``.  The same convex combination of completions
    is then compared with the original: the report lists the exact block
    and element gaps up to the horizon.  Deeper truncations can only see
    more of the original, so the gaps over a fixed initial range shrink
    as ``n`` grows; the report makes that measurable rather than
    assumed.
    """
    if n < 1:
        raise InputError("the truncation depth must be positive")
    if horizon <= n:
        raise InputError("the horizon must exceed the truncation depth")
    if not w_full.nonnegative:
        raise InputError("the target function must be nonnegative")
    sums = _touched_sums(generator, w_full)
    last_block = horizon
    if generator.block_count is not None:
        last_block = min(horizon, generator.block_count)
    for k in range(1, last_block + 1):
        total = sums.get(k, Fraction(0))
        if total != 1:
            raise NotStochasticError(
                f"block {k} sums to {total}, expected 1"
            )
    for k, total in sorted(sums.items()):
        if total > 1:
            raise NotStochasticError(f"block {k} sums to {total} > 1")

    star = WeightFunction(
        {
            g: value
            for g, value in w_full.items()
            if min(generator.gamma_of(g)) <= n
        }
    )
    touched = sorted(_touched_sums(generator, star))
    members: list[list[int]] = []
    slack_of: dict[int, int] = {}
    next_label = max(star.support, default=0) + 1
    for k in touched:
        inside = sorted(g for g in star.support if generator.contains(k, g))
        if k > n:
            slack_of[k] = next_label
            inside.append(next_label)
            next_label += 1
        members.append(inside)
    finite = build_family(members)
    augmented = dict(star.items())
    for k, label in slack_of.items():
        augmented[label] = 1 - sum(
            star.value(g) for g in star.support if generator.contains(k, g)
        )
    slack_labels = set(slack_of.values())
    base_decomposition = decompose(finite, WeightFunction(augmented))

    terms = []
    for coefficient, vertex in base_decomposition.terms:
        stripped = WeightFunction(
            {g: v for g, v in vertex.items() if g not in slack_labels}
        )
        completion = extend_truncation(
            generator, Truncation(n=n, w=stripped), horizon
        )
        terms.append((coefficient, completion.extended))
    approximation = Decomposition(terms=tuple(terms))
    combined = approximation.combined()

    combined_sums = _touched_sums(generator, combined)
    block_gap: dict[int, Fraction] = {}
    for k in range(1, last_block + 1):
        have = combined_sums.get(k, Fraction(0))
        want = sums.get(k, Fraction(0))
        block_gap[k] = abs(want - have)
    element_gap: dict[int, Fraction] = {}
    for g in sorted(set(w_full.support) | set(combined.support)):
        if min(generator.gamma_of(g)) <= n:
            gap = abs(w_full.value(g) - combined.value(g))
            if gap != 0:
                element_gap[g] = gap
    report = ApproximationReport(
        n=n,
        horizon=horizon,
        block_discrepancy=block_gap,
        element_discrepancy=element_gap,
        combined=combined,
    )
    return approximation, report
