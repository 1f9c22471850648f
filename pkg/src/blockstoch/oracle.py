"""Exhaustive exact enumeration of the vertices of the weight polytope.

The admissible weight functions of a finite family form a bounded
polytope: one equality per block plus nonnegativity.  Every vertex is
the unique solution supported inside some linearly independent column
set whose size equals the rank of the block-sum system, so enumerating
those column sets finds every vertex.  Everything here runs over exact
rationals and is deliberately independent of the structural classifier,
so the two can be validated against each other.
"""

from __future__ import annotations

import math
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .errors import (
    ConditionsViolatedError,
    DepthExceededError,
    InputError,
    InstanceTooLargeError,
    InternalPropertyError,
)
from .family import (
    SetFamily,
    WeightFunction,
    classify_membership,
    max_multiplicity,
    require_stochastic,
)

DEFAULT_BUDGET = 1 << 20

Matrix = list[list[Fraction]]


def _block_rows(family: SetFamily, columns: tuple[int, ...]) -> Matrix:
    position = {g: i for i, g in enumerate(columns)}
    rows = []
    for b in family.blocks:
        row = [Fraction(0)] * len(columns)
        for g in b.members:
            if g in position:
                row[position[g]] = Fraction(1)
        rows.append(row)
    return rows


def _rref(aug: Matrix, ncols: int) -> list[int]:
    """Row-reduce in place over the first ``ncols`` columns; return pivot columns."""
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot_row = next((i for i in range(r, len(aug)) if aug[i][c] != 0), None)
        if pivot_row is None:
            continue
        aug[r], aug[pivot_row] = aug[pivot_row], aug[r]
        pv = aug[r][c]
        if pv != 1:
            aug[r] = [v / pv for v in aug[r]]
        for i in range(len(aug)):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
        if r == len(aug):
            break
    return pivots


def _rank(rows: Matrix) -> int:
    if not rows:
        return 0
    return len(_rref([row[:] for row in rows], len(rows[0])))


def _solve_all_ones(rows: Matrix) -> list[Fraction] | None:
    """Unique solution of ``rows @ x = 1``, or None if absent or non-unique."""
    ncols = len(rows[0])
    aug = [row[:] + [Fraction(1)] for row in rows]
    pivots = _rref(aug, ncols)
    for i in range(len(pivots), len(aug)):
        if aug[i][ncols] != 0:
            return None
    if len(pivots) < ncols:
        return None
    x = [Fraction(0)] * ncols
    for i, c in enumerate(pivots):
        x[c] = aug[i][ncols]
    return x


def _kernel_vector(rows: Matrix, ncols: int) -> list[Fraction] | None:
    """A nonzero exact solution of ``rows @ x = 0``, or None at full column rank."""
    reduced = [row[:] for row in rows]
    pivots = _rref(reduced, ncols)
    if len(pivots) == ncols:
        return None
    free = next(c for c in range(ncols) if c not in pivots)
    x = [Fraction(0)] * ncols
    x[free] = Fraction(1)
    for i, c in enumerate(pivots):
        x[c] = -reduced[i][free]
    return x


def _solve_chunk(args):
    member_lists, columns, combos = args
    position = {g: i for i, g in enumerate(columns)}
    rows: Matrix = []
    for members in member_lists:
        row = [Fraction(0)] * len(columns)
        for g in members:
            row[position[g]] = Fraction(1)
        rows.append(row)
    out = []
    for combo in combos:
        sub = [[row[i] for i in combo] for row in rows]
        x = _solve_all_ones(sub)
        if x is not None and all(v >= 0 for v in x):
            out.append(tuple((columns[i], v) for i, v in zip(combo, x) if v != 0))
    return out


def enumerate_vertices(
    family: SetFamily, budget: int = DEFAULT_BUDGET, jobs: int = 1
) -> tuple[WeightFunction, ...]:
    """All vertices of the polytope of stochastic weight functions.

    Candidate supports are the rank-sized column subsets that touch
    every block; each is solved exactly and kept when the unique
    solution is nonnegative.  Raises when the raw candidate count
    exceeds ``budget``.  The result is sorted and independent of
    ``jobs``.
    """
    if jobs < 1:
        raise InputError("jobs must be at least 1")
    columns = family.ground
    rows = _block_rows(family, columns)
    r = _rank(rows)
    total = math.comb(len(columns), r)
    if total > budget:
        raise InstanceTooLargeError(
            f"{total} candidate supports exceed the budget of {budget}"
        )
    masks = []
    for g in columns:
        mask = 0
        for pos, b in enumerate(family.blocks):
            if g in b.member_set:
                mask |= 1 << pos
        masks.append(mask)
    full = (1 << len(family.blocks)) - 1
    candidates = [
        combo
        for combo in combinations(range(len(columns)), r)
        if _or_all(masks, combo) == full
    ]
    member_lists = tuple(b.members for b in family.blocks)
    found: dict[tuple, WeightFunction] = {}
    if jobs == 1 or len(candidates) < 64:
        chunks = [(member_lists, columns, candidates)]
        results = map(_solve_chunk, chunks)
    else:
        step = max(1, math.ceil(len(candidates) / (jobs * 4)))
        chunks = [
            (member_lists, columns, candidates[i : i + step])
            for i in range(0, len(candidates), step)
        ]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_solve_chunk, chunks))
    for chunk_result in results:
        for items in chunk_result:
            if items not in found:
                found[items] = WeightFunction(dict(items))
    return tuple(sorted(found.values(), key=lambda w: w.sort_key()))


def _or_all(masks: list[int], combo: tuple[int, ...]) -> int:
    acc = 0
    for i in combo:
        acc |= masks[i]
    return acc


def is_vertex(family: SetFamily, w: WeightFunction) -> bool:
    """Whether a stochastic weight function is a vertex of the polytope.

    Holds exactly when the block-sum columns of its support are linearly
    independent.
    """
    require_stochastic(family, w)
    supp = w.support
    rows = _block_rows(family, supp)
    return _rank(rows) == len(supp)


def _vertex_within(family: SetFamily, start: WeightFunction) -> WeightFunction:
    """Walk from a stochastic point to a vertex without growing the support."""
    current = start
    for _ in range(len(family.ground) + 2):
        supp = current.support
        rows = _block_rows(family, supp)
        kernel = _kernel_vector(rows, len(supp))
        if kernel is None:
            return current
        direction = WeightFunction(
            {g: kv for g, kv in zip(supp, kernel) if kv != 0}
        )
        step = min(-current(g) / dv for g, dv in direction.items() if dv < 0)
        current = current + direction.scaled(step)
    raise DepthExceededError("vertex walk did not terminate")


@dataclass(frozen=True)
class Decomposition:
    """A convex combination of vertices, largest coefficient first."""

    terms: tuple[tuple[Fraction, WeightFunction], ...]

    def combined(self) -> WeightFunction:
        acc = WeightFunction.zero()
        for coef, vertex in self.terms:
            acc = acc + vertex.scaled(coef)
        return acc


def decompose(family: SetFamily, w: WeightFunction) -> Decomposition:
    """Write a stochastic weight function as a convex combination of vertices.

    Peels off one vertex at a time, shrinking the support at every step,
    then prunes affine dependencies so the number of terms is at most
    one more than the dimension of the polytope.  The result recombines
    to the input exactly.
    """
    require_stochastic(family, w)
    terms: list[tuple[Fraction, WeightFunction]] = []
    coef = Fraction(1)
    current = w
    for _ in range(len(family.ground) + 2):
        supp = current.support
        if _rank(_block_rows(family, supp)) == len(supp):
            terms.append((coef, current))
            break
        vertex = _vertex_within(family, current)
        t = min(current(g) / vertex(g) for g in vertex.support)
        if t >= 1:
            raise InternalPropertyError("peeling step did not reduce the point")
        terms.append((coef * t, vertex))
        current = (current - vertex.scaled(t)).scaled(1 / (Fraction(1) - t))
        coef = coef * (Fraction(1) - t)
    else:
        raise DepthExceededError("vertex peeling did not terminate")
    terms = _merge_duplicates(terms)
    terms = _prune_affine(terms, family.ground)
    total = sum(c for c, _ in terms)
    recombined = Decomposition(terms=tuple(terms)).combined()
    if total != 1 or recombined != w or any(c <= 0 for c, _ in terms):
        raise InternalPropertyError("decomposition does not recombine to the input")
    terms.sort(key=lambda cw: (-cw[0], cw[1].sort_key()))
    return Decomposition(terms=tuple(terms))


def _merge_duplicates(
    terms: list[tuple[Fraction, WeightFunction]]
) -> list[tuple[Fraction, WeightFunction]]:
    merged: dict[WeightFunction, Fraction] = {}
    for coef, vertex in terms:
        merged[vertex] = merged.get(vertex, Fraction(0)) + coef
    return [(c, v) for v, c in merged.items() if c != 0]


def _prune_affine(
    terms: list[tuple[Fraction, WeightFunction]], columns: tuple[int, ...]
) -> list[tuple[Fraction, WeightFunction]]:
    while len(terms) > 1:
        rows = [[v.value(g) for _, v in terms] for g in columns]
        rows.append([Fraction(1)] * len(terms))
        mu = _kernel_vector(rows, len(terms))
        if mu is None:
            return terms
        theta = min(c / m for (c, _), m in zip(terms, mu) if m > 0)
        terms = [
            (c - theta * m, v)
            for (c, v), m in zip(terms, mu)
            if c - theta * m != 0
        ]
    return terms


@dataclass(frozen=True)
class CrossValidation:
    """Agreement report between the enumeration and the classifier."""

    vertex_count: int
    samples_checked: int
    discrepancies: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.discrepancies


def cross_validate(
    family: SetFamily,
    samples: int = 5,
    seed: int = 0,
    budget: int = DEFAULT_BUDGET,
    jobs: int = 1,
) -> CrossValidation:
    """Check the classifier against exhaustive enumeration on one family.

    Every enumerated vertex must be classified extreme, and random
    strict convex combinations of distinct vertices must be classified
    non-extreme with a witness that averages back to the sample.
    """
    from . import extremality

    if max_multiplicity(family) > 2:
        raise ConditionsViolatedError(
            "cross validation compares against the classifier,"
            " which needs every multiplicity at most two"
        )
    vertices = enumerate_vertices(family, budget=budget, jobs=jobs)
    discrepancies: list[str] = []
    for v in vertices:
        verdict = extremality.classify_extreme(family, v)
        if verdict.kind != "extreme":
            discrepancies.append(f"vertex {dict(v.items())} classified {verdict.kind}")
    rng = random.Random(seed)
    samples_checked = 0
    if len(vertices) >= 2:
        for _ in range(samples):
            count = rng.randint(2, min(len(vertices), 4))
            picked = [vertices[i] for i in sorted(rng.sample(range(len(vertices)), count))]
            raw = [Fraction(rng.randint(1, 9)) for _ in picked]
            total = sum(raw)
            mix = WeightFunction.zero()
            for lam, v in zip(raw, picked):
                mix = mix + v.scaled(lam / total)
            samples_checked += 1
            if is_vertex(family, mix):
                discrepancies.append(f"mixture {dict(mix.items())} is a vertex")
                continue
            verdict = extremality.classify_extreme(family, mix)
            if verdict.kind != "not_extreme":
                discrepancies.append(
                    f"mixture {dict(mix.items())} classified {verdict.kind}"
                )
                continue
            witness = verdict.witness
            if witness is None:
                discrepancies.append(f"mixture {dict(mix.items())} has no witness")
                continue
            midpoint = (witness.w_plus + witness.w_minus).scaled(Fraction(1, 2))
            if midpoint != mix or witness.w_plus == witness.w_minus:
                discrepancies.append(
                    f"witness for mixture {dict(mix.items())} does not average back"
                )
                continue
            for half in (witness.w_plus, witness.w_minus):
                report = classify_membership(family, half)
                if not (report.nonnegative and report.stochastic):
                    discrepancies.append(
                        f"witness half {dict(half.items())} leaves the polytope"
                    )
    return CrossValidation(
        vertex_count=len(vertices),
        samples_checked=samples_checked,
        discrepancies=tuple(discrepancies),
    )


def sup_block_norm(family: SetFamily, w: WeightFunction) -> Fraction:
    """The largest absolute block sum, over all blocks."""
    best = Fraction(0)
    for b in family.blocks:
        s = sum((abs(w.value(g)) for g in b.members), Fraction(0))
        if s > best:
            best = s
    return best


def support_width(family: SetFamily, w: WeightFunction) -> int:
    """The largest number of support elements any block contains."""
    supp = set(w.support)
    return max((len(supp & b.member_set) for b in family.blocks), default=0)
