import itertools
import math

import pytest

from sgshift.errors import ApproximateSetError, OracleCapError
from sgshift.graph import build_s_gap
from sgshift.nset import NSet, ns_stats, parse_literal
from sgshift.oracle import (
    blocked_windows,
    count_periodic,
    count_words,
    crosscheck,
    entropy_estimate,
    enum_periodic,
    enum_words,
    is_periodic_word,
    render_word,
)
from sgshift.zeta import periodic_counts
from shift_zoo import PHI, directed_cycle, even_shift, golden_mean, random_sgraph, zoo_graphs


def fib(n):
    a, b = 0, 1
    for _ in range(n):
        a, b = b, a + b
    return a


def brute_words(g, n):
    """Filter every string over the alphabet through the run rule, written out independently."""
    out = []
    for w in itertools.product(range(len(g)), repeat=n):
        runs = [(v, len(list(grp))) for v, grp in itertools.groupby(w)]
        ok = all((runs[i][0], runs[i + 1][0]) in g.edges for i in range(len(runs) - 1))
        for i, (v, L) in enumerate(runs):
            S = g.sets[v]
            boundary = i == 0 or i == len(runs) - 1
            if boundary:
                ok = ok and (not S.is_finite or S.max >= L)
            else:
                ok = ok and L in S
        if ok:
            out.append(w)
    return out


def test_golden_mean_words():
    g = golden_mean()
    assert [render_word(g, w) for w in enum_words(g, 3)] == ["000", "001", "010", "100", "101"]


def test_even_shift_excludes_odd_interior_gap():
    g = even_shift()
    words = {render_word(g, w) for w in enum_words(g, 3)}
    assert "101" not in words
    assert {"100", "001", "111", "000"} <= words


def test_two_cycle_words():
    g = directed_cycle("1", "1")
    assert [render_word(g, w) for w in enum_words(g, 2)] == ["12", "21"]


@pytest.mark.parametrize("name,g", zoo_graphs(10))
def test_enumeration_matches_brute_force(name, g):
    for n in range(1, 6 if len(g) <= 4 else 5):
        assert enum_words(g, n) == sorted(brute_words(g, n))
        assert count_words(g, n) == len(enum_words(g, n))


def test_fibonacci_counts():
    g = golden_mean()
    for n in range(1, 21):
        assert count_words(g, n) == fib(n + 2)
    assert count_words(g, 20) == 17711
    assert abs(entropy_estimate(g, 20) - math.log(PHI)) < 0.01


def test_trivial_estimate():
    g = directed_cycle("1", "1")
    assert entropy_estimate(g, 10) == pytest.approx(math.log(2) / 10)


def test_periodic_examples():
    g = golden_mean()
    p2, reps = enum_periodic(g, 2)
    assert p2 == 3 and reps == [(0, 0), (0, 1)]
    assert enum_periodic(g, 1)[0] == 1
    assert enum_periodic(directed_cycle("1", "1"), 1)[0] == 0
    assert is_periodic_word(g, (0, 1)) and not is_periodic_word(g, (1,))


@pytest.mark.parametrize("name,g", zoo_graphs(12))
def test_periodic_counts_match_analytic(name, g):
    brute = [enum_periodic(g, n)[0] for n in range(1, 9)]
    assert brute == [count_periodic(g, n) for n in range(1, 9)]
    assert brute == periodic_counts(g, 8)


@pytest.mark.parametrize("name,g", zoo_graphs(8))
def test_submultiplicative(name, g):
    counts = [count_words(g, n) for n in range(1, 13)]
    for m, n in itertools.product(range(1, 13), repeat=2):
        if m + n <= 12:
            assert counts[m + n - 1] <= counts[m - 1] * counts[n - 1]


@pytest.mark.parametrize("name,g", zoo_graphs(8))
def test_subword_closure_and_extendability(name, g):
    n = 6
    shorter = set(enum_words(g, n - 1))
    words = enum_words(g, n)
    longer = enum_words(g, n + 1)
    prefixes = {w[:-1] for w in longer}
    suffixes = {w[1:] for w in longer}
    for w in words:
        assert w[1:] in shorter and w[:-1] in shorter
        assert w in prefixes and w in suffixes


FINITE = [
    directed_cycle("1,2", "3"),
    directed_cycle("1", "1,3", "2"),
    build_s_gap(parse_literal("1,2,4")),
] + [random_sgraph(s, max_vertices=3).with_sets([NSet.finite([1, 2])] * len(random_sgraph(s, max_vertices=3))) for s in range(3)]


@pytest.mark.parametrize("g", FINITE, ids=[f"finite{i}" for i in range(len(FINITE))])
def test_run_rule_matches_blocked_windows(g):
    stats = [ns_stats(S) for S in g.sets]
    K = 2 * max(s["min"] + s["gap_sup"] for s in stats)
    for n in range(1, 6):
        assert set(enum_words(g, n)) == blocked_windows(g, n, K)


def test_caps_and_approximate_sets():
    with pytest.raises(OracleCapError):
        enum_words(golden_mean(), 23)
    approx = build_s_gap(NSet.finite([1, 2], approximate=True))
    with pytest.raises(ApproximateSetError):
        enum_words(approx, 3)
    assert len(enum_words(approx, 3, lower_bound=True)) == count_words(approx, 3, lower_bound=True)


def test_crosscheck_golden_mean():
    r = crosscheck(golden_mean(), 10)
    assert r.passed
    assert r.word_counts == [fib(n + 2) for n in range(1, 11)]


@pytest.mark.parametrize("name,g", zoo_graphs(6))
def test_crosscheck_zoo(name, g):
    assert crosscheck(g, 8).passed
