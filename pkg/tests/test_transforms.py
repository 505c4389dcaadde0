import numpy as np
import pytest

from sgshift.dynamics import is_mixing
from sgshift.entropy import entropy, gen_matrix_eval
from sgshift.errors import DecompositionError, ObstructionError
from sgshift.graph import SGraph, build_ordered_limited, is_directed_cycle
from sgshift.nset import NSet, parse_literal
from sgshift.oracle import count_periodic
from sgshift.transforms import edge_extend, in_split, lift, out_split, vertex_clone
from sgshift.zeta import least_period_counts, p1_count
from shift_zoo import applicable_transforms, directed_cycle, golden_mean, random_sgraph

N = NSet.naturals()
ONE = NSet.finite([1])


def named_edges(g):
    return {(g.names[a], g.names[b]) for a, b in g.edges}


def figure_graph():
    """a, b -> c -> d, e, f"""
    return SGraph.from_named(
        [(v, N) for v in "abcdef"], [("a", "c"), ("b", "c"), ("c", "d"), ("c", "e"), ("c", "f")]
    )


def q_counts(g, upto=8):
    return least_period_counts([count_periodic(g, n) for n in range(1, upto + 1)])


def charpoly_gap(before, after, x, z):
    """Relative mismatch of ``z det(zI - B)`` and ``det(zI - B')``."""
    B, B2 = gen_matrix_eval(before, x), gen_matrix_eval(after, x)
    lhs = z * np.linalg.det(z * np.eye(len(B)) - B)
    rhs = np.linalg.det(z * np.eye(len(B2)) - B2)
    return abs(lhs - rhs) / max(1.0, abs(lhs))


RANDOM_CASES = [
    (f"{label}/seed{seed}", kind, g, G, rec)
    for seed in range(50)
    for g in [random_sgraph(seed)]
    for label, kind, G, rec in applicable_transforms(g)
]


def test_edge_extension_figure():
    g = figure_graph().with_sets([N, N, parse_literal("3+1k"), N, N, N])
    G, rec = edge_extend(g, "c", parse_literal("1,2"), NSet.progression(2, 2))
    assert len(G) == 7 and rec.new_vertex == "c'"
    assert named_edges(G) == {("a", "c"), ("b", "c"), ("c", "c'"), ("c'", "d"), ("c'", "e"), ("c'", "f")}
    assert G.sets[G.index("c")] == parse_literal("1,2")
    assert G.sets[G.index("c'")] == NSet.progression(2, 2)


def test_out_split_figure():
    G, rec = out_split(figure_graph(), "c", ["d", "e"], ["f"])
    assert named_edges(G) == {
        ("a", "c"), ("a", "c'"), ("b", "c"), ("b", "c'"), ("c", "d"), ("c", "e"), ("c'", "f"),
    }
    assert G.sets[G.index("c'")] == N and rec.conjugacy == "unknown"


def test_in_split_figure():
    G, _ = in_split(figure_graph(), "c", ["a"], ["b"])
    assert named_edges(G) == {
        ("a", "c"), ("b", "c'"), ("c", "d"), ("c", "e"), ("c", "f"), ("c'", "d"), ("c'", "e"), ("c'", "f"),
    }


def test_clone_figure():
    g = SGraph.from_named([(v, N) for v in "abcd"], [("a", "b"), ("a", "c"), ("b", "c"), ("c", "d"), ("d", "a")])
    G, _ = vertex_clone(g, "c", NSet.progression(1, 2), NSet.progression(2, 2))
    assert named_edges(G) == {
        ("a", "b"), ("a", "c"), ("a", "c'"), ("b", "c"), ("b", "c'"), ("c", "d"), ("c'", "d"), ("d", "a"),
    }


def test_edge_extension_conjugacy_verdicts():
    _, rec = edge_extend(directed_cycle("2", "1"), "1", ONE, ONE)
    assert rec.conjugacy == "yes"
    _, rec = edge_extend(directed_cycle("3+1k", "1"), "1", parse_literal("1,2"), NSet.progression(2, 2))
    assert rec.conjugacy == "unknown"  # neither part a singleton, S_v infinite
    _, rec = edge_extend(directed_cycle("3,4", "1"), "1", parse_literal("1,2"), NSet.finite([2]))
    assert rec.conjugacy == "yes"
    with pytest.raises(DecompositionError):
        edge_extend(directed_cycle("3", "1"), "1", ONE, ONE)


def test_clone_p1_bookkeeping():
    g = golden_mean()
    G, rec = vertex_clone(g, "0", NSet.progression(1, 2), NSet.progression(2, 2))
    assert (rec.p1_before, rec.p1_after, rec.conjugacy) == (1, 2, "no")
    assert p1_count(G) == p1_count(g) + 1
    G, rec = vertex_clone(g, "0", ONE, parse_literal("2+1k"))
    assert (rec.p1_before, rec.p1_after, rec.conjugacy) == (1, 1, "yes")
    assert entropy(G).entropy == pytest.approx(entropy(g).entropy, abs=1e-12)


def test_clone_errors():
    with pytest.raises(DecompositionError):
        vertex_clone(golden_mean(), "0", None, N)
    with pytest.raises(DecompositionError):
        vertex_clone(golden_mean(), "0", ONE, N)


def test_split_errors():
    g = figure_graph()
    with pytest.raises(DecompositionError):
        out_split(g, "c", ["d", "e", "f"], [])
    with pytest.raises(DecompositionError):
        out_split(g, "c", ["d"], ["e"])
    with pytest.raises(DecompositionError):
        in_split(g, "c", ["a"], ["a", "b"])


def test_split_conjugacy_when_finite():
    g = directed_cycle("1,2", "3").with_sets([parse_literal("1,2"), parse_literal("3")])
    g = SGraph(g.names + ("x",), g.sets + (ONE,), g.edges | {(0, 2), (2, 0)})
    _, rec = out_split(g, 0, [1], [2])
    assert rec.conjugacy == "yes"


@pytest.mark.parametrize("label,kind,g,G,rec", RANDOM_CASES, ids=[c[0] for c in RANDOM_CASES])
def test_entropy_invariant(label, kind, g, G, rec):
    assert abs(entropy(g).entropy - entropy(G).entropy) <= 1e-9


@pytest.mark.parametrize("label,kind,g,G,rec", RANDOM_CASES, ids=[c[0] for c in RANDOM_CASES])
def test_periodic_invariant(label, kind, g, G, rec):
    assert q_counts(g)[1:] == q_counts(G)[1:]


@pytest.mark.parametrize("label,kind,g,G,rec", RANDOM_CASES, ids=[c[0] for c in RANDOM_CASES])
def test_mixing_preserved(label, kind, g, G, rec):
    if is_mixing(g):
        assert is_mixing(G)


SPLIT_CLONE = [c for c in RANDOM_CASES if c[1] != "edge_extend"]


@pytest.mark.parametrize("label,kind,g,G,rec", SPLIT_CLONE, ids=[c[0] for c in SPLIT_CLONE])
def test_spectrum_gains_a_zero(label, kind, g, G, rec):
    for x in (0.1, 0.2, 0.3, 0.4, 0.45):
        for z in (0.7 + 0.3j, -1.1 + 0.5j, 2.0, 0.3 - 1.2j):
            assert charpoly_gap(g, G, x, z) <= 1e-8


def test_edge_extension_can_change_spectrum():
    # the generating matrix is not a row split here, so only rho(x) = 1 is shared
    g = directed_cycle("2", "1")
    G, _ = edge_extend(g, "1", ONE, ONE)
    assert charpoly_gap(g, G, 0.5, 0.7 + 0.3j) > 1e-3
    assert entropy(g).entropy == entropy(G).entropy == 0.0


def test_p1_changes_only_with_infinite_duplication():
    for label, kind, g, G, rec in RANDOM_CASES:
        if rec.p1_before != rec.p1_after:
            assert rec.conjugacy == "no"
            assert kind in ("out_split", "in_split", "clone")


def test_lift_golden_mean():
    g = golden_mean()
    G, records = lift(g, 3)
    assert len(G) == 3 and all(r.conjugacy == "yes" for r in records)
    assert entropy(G).entropy == pytest.approx(entropy(g).entropy, abs=1e-12)
    assert q_counts(G)[1:] == q_counts(g)[1:]
    assert p1_count(G) == p1_count(g)


def test_lift_obstruction():
    with pytest.raises(ObstructionError):
        lift(directed_cycle("1", "1"), 3)


def test_lift_by_edge_extension():
    G, records = lift(directed_cycle("2", "3"), 5)
    assert len(G) == 5 and is_directed_cycle(G)
    assert all(S == ONE for S in G.sets)
    assert entropy(G).entropy == 0.0
    assert [r.parameters["operation"] for r in records] == ["edge_extend"] * 3


@pytest.mark.parametrize("seed", range(8))
def test_lift_random(seed):
    g = random_sgraph(seed, max_vertices=4)
    G, _ = lift(g, len(g) + 2)
    assert len(G) == len(g) + 2
    assert abs(entropy(G).entropy - entropy(g).entropy) <= 1e-9
    assert q_counts(G, 6) == q_counts(g, 6)


def test_ordered_builder_round_trip_through_clone():
    g = build_ordered_limited([N, ONE])
    G, _ = vertex_clone(g, "1", ONE, parse_literal("2+1k"))
    assert q_counts(G) == q_counts(g)
