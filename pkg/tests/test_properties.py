"""Property-based checks over randomly drawn families."""

from fractions import Fraction

from hypothesis import given, settings, strategies as st

from blockstoch.extremality import classify_extreme
from blockstoch.family import (
    WeightFunction,
    build_family,
    classify_membership,
    max_multiplicity,
    normalize,
)
from blockstoch.graphs import Path, build_graph, decompose_cycle
from blockstoch.instance_io import dump_instance, parse_instance
from blockstoch.oracle import decompose, enumerate_vertices

from helpers import assert_cycle_pieces, assert_valid_witness

F = Fraction


@st.composite
def small_families(draw):
    """A family over at most seven elements with multiplicity at most two."""
    n = draw(st.integers(min_value=2, max_value=7))
    ground = list(range(1, n + 1))
    quota = {g: 2 for g in ground}
    blocks: list[tuple[int, ...]] = []
    seen: set[frozenset[int]] = set()
    for _ in range(draw(st.integers(min_value=1, max_value=5))):
        pool = [g for g in ground if quota[g] > 0]
        if not pool:
            break
        size = draw(st.integers(min_value=1, max_value=min(3, len(pool))))
        picks = draw(
            st.lists(
                st.sampled_from(pool),
                min_size=size,
                max_size=size,
                unique=True,
            )
        )
        members = frozenset(picks)
        if members in seen:
            continue
        seen.add(members)
        blocks.append(tuple(sorted(members)))
        for g in members:
            quota[g] -= 1
    if not blocks:
        blocks = [(1,)]
    return build_family(blocks)


@st.composite
def chorded_cycles(draw):
    """A simple cycle family plus random chord blocks."""
    n = draw(st.integers(min_value=3, max_value=8))
    blocks = [(i, i % n + 1) for i in range(1, n + 1)]
    chords = draw(
        st.sets(
            st.tuples(
                st.integers(min_value=1, max_value=n),
                st.integers(min_value=1, max_value=n),
            ).map(lambda p: tuple(sorted(p))),
            max_size=3,
        )
    )
    for a, b in sorted(chords):
        if a == b or (a, b) in blocks or (b - a) in (1, n - 1):
            continue
        blocks.append((a, b))
    return build_family(blocks), n


@settings(max_examples=60, deadline=None)
@given(small_families())
def test_vertex_values_are_half_integral(fam):
    assert max_multiplicity(fam) <= 2
    for vertex in enumerate_vertices(fam):
        values = {value for _, value in vertex.items()}
        assert values <= {F(1, 2), F(1)}


@settings(max_examples=60, deadline=None)
@given(small_families())
def test_every_vertex_classifies_extreme(fam):
    for vertex in enumerate_vertices(fam):
        assert classify_extreme(fam, vertex).kind == "extreme"


@settings(max_examples=40, deadline=None)
@given(small_families(), st.integers(min_value=1, max_value=9))
def test_strict_mixtures_are_recognized(fam, tenths):
    vertices = enumerate_vertices(fam)
    if len(vertices) < 2:
        return
    lam = F(tenths, 10)
    first, second = vertices[0], vertices[-1]
    mix = first.scaled(lam) + second.scaled(1 - lam)
    if mix in (first, second):
        return
    verdict = classify_extreme(fam, mix)
    assert verdict.kind == "not_extreme"
    assert_valid_witness(fam, mix, verdict.witness)


@settings(max_examples=40, deadline=None)
@given(small_families(), st.data())
def test_decompose_recombines_exactly(fam, data):
    vertices = enumerate_vertices(fam)
    if not vertices:
        return
    count = min(len(vertices), 3)
    weights = data.draw(
        st.lists(
            st.integers(min_value=1, max_value=5),
            min_size=count,
            max_size=count,
        )
    )
    total = sum(weights)
    mix = WeightFunction({})
    for coefficient, vertex in zip(weights, vertices[:count]):
        mix = mix + vertex.scaled(F(coefficient, total))
    result = decompose(fam, mix)
    assert result.combined() == mix
    coefficients = [c for c, _ in result.terms]
    assert sum(coefficients) == 1
    assert all(c > 0 for c in coefficients)
    assert coefficients == sorted(coefficients, reverse=True)


@settings(max_examples=60, deadline=None)
@given(chorded_cycles())
def test_cycle_decomposition_properties(drawn):
    fam, n = drawn
    graph = build_graph(fam)
    cycle = Path(tuple(range(1, n + 1)), is_cycle=True)
    result = decompose_cycle(graph, fam, cycle)
    assert_cycle_pieces(graph, fam, cycle, result.pieces)


@settings(max_examples=60, deadline=None)
@given(small_families(), st.data())
def test_instance_round_trip(fam, data):
    numerators = data.draw(
        st.lists(
            st.integers(min_value=0, max_value=6),
            min_size=len(fam.ground),
            max_size=len(fam.ground),
        )
    )
    w = WeightFunction(
        {g: F(k, 6) for g, k in zip(fam.ground, numerators) if k}
    )
    text = dump_instance(fam, w, feasible=classify_membership(fam, w).stochastic)
    inst = parse_instance(text)
    assert inst.family.blocks == fam.blocks
    assert inst.family.ground == fam.ground
    assert (inst.weights or WeightFunction({})) == w


@settings(max_examples=60, deadline=None)
@given(small_families())
def test_normalize_is_idempotent(fam):
    once, _ = normalize(fam)
    twice, log = normalize(once)
    assert twice.blocks == once.blocks
    assert log.removed_blocks == ()
    assert log.removed_elements == ()
