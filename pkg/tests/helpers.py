"""Shared assertion helpers, independent of the library's internal checks."""

from fractions import Fraction

from blockstoch.family import SetFamily, WeightFunction, classify_membership
from blockstoch.graphs import (
    AssociatedGraph,
    Path,
    block_vertex_counts,
    is_primitive,
)


def assert_valid_witness(family: SetFamily, w: WeightFunction, witness) -> None:
    """A witness must split w into two distinct admissible halves."""
    for half in (witness.w_plus, witness.w_minus):
        report = classify_membership(family, half)
        assert report.nonnegative
        assert report.stochastic
    assert witness.w_plus != witness.w_minus
    average = (witness.w_plus + witness.w_minus).scaled(Fraction(1, 2))
    assert average == w
    assert witness.epsilon > 0


def assert_cycle_pieces(
    graph: AssociatedGraph,
    family: SetFamily,
    cycle: Path,
    pieces: tuple[Path, ...],
) -> None:
    """Re-check the four advertised decomposition properties from scratch."""
    covered: set[int] = set()
    for piece in pieces:
        assert piece.is_cycle
        assert len(set(piece.vertices)) == len(piece.vertices)
        for g, h in piece.edges():
            assert graph.adjacent(g, h)
        counts = block_vertex_counts(family, piece.vertices)
        assert is_primitive(family, piece) or any(
            c >= 3 for c in counts.values()
        )
        covered |= set(piece.vertices)
    assert covered == set(cycle.vertices)
    for i in range(len(pieces)):
        for j in range(i + 1, len(pieces)):
            shared = set(pieces[i].vertices) & set(pieces[j].vertices)
            if j == i + 1:
                shared_edges = {
                    frozenset(e) for e in pieces[i].edges()
                } & {frozenset(e) for e in pieces[j].edges()}
                assert len(shared) == 2
                assert len(shared_edges) == 1
            else:
                assert len(shared) <= 1
