import math
import random

import pytest

from sgshift.dynamics import (
    cycle_sum_gcd,
    has_spec,
    has_weak_spec,
    is_mixing,
    is_sft,
    is_sofic,
    is_trivial,
    properties,
    spec_constants,
)
from sgshift.entropy import entropy
from sgshift.errors import NotWeaklySpecifiedError
from sgshift.graph import SGraph, build_s_gap, build_unordered_limited, is_irreducible
from sgshift.nset import NSet, parse_literal
from sgshift.oracle import enum_words
from shift_zoo import brute_force_gcd, directed_cycle, even_shift, golden_mean, zoo_graphs

N = NSet.naturals()


def connecting_lengths(g, alpha, beta, n_max):
    """Lengths n <= n_max with some word u of length n making alpha u beta legal."""
    p = len(g)
    member = [[k in S for k in range(n_max + 20)] for S in g.sets]
    top = [math.inf if not S.is_finite else S.max for S in g.sets]

    def step(states, allowed):
        out = set()
        for v, k, first in states:
            for w in allowed:
                if w == v:
                    if k + 1 <= top[v]:
                        out.add((v, k + 1, first))
                elif (v, w) in g.edges and (k <= top[v] if first else member[v][k]):
                    out.add((w, 1, False))
        return out

    states = {(alpha[0], 1, True)}
    for a in alpha[1:]:
        states = step(states, [a])
    found = []
    for n in range(n_max + 1):
        s = states
        for b in beta:
            s = step(s, [b])
        if s:
            found.append(n)
        states = step(states, range(p))
    return found


def test_sft_examples():
    assert is_sft(golden_mean()) is True
    assert is_sft(even_shift()) is False
    assert is_sft(directed_cycle("1,2", "3")) is True


def test_sofic_examples():
    assert is_sofic(even_shift()) is True
    assert is_sofic(golden_mean()) is True
    primes = NSet.finite([2, 3, 5, 7, 11, 13], approximate=True)
    assert is_sofic(build_s_gap(primes)) is None


def test_cycle_gcd_examples():
    assert cycle_sum_gcd(golden_mean()) == 1
    assert cycle_sum_gcd(directed_cycle("2", "2")) == 4
    assert cycle_sum_gcd(directed_cycle("2,4", "2")) == 2


@pytest.mark.parametrize("name,g", zoo_graphs(20))
def test_cycle_gcd_matches_brute_force(name, g):
    if len(g) <= 5:
        assert cycle_sum_gcd(g) == brute_force_gcd(g)


def test_mixing_examples():
    assert is_mixing(golden_mean()) is True
    assert is_mixing(directed_cycle("2", "2")) is False
    two = SGraph.from_named(
        [(v, N) for v in "abcd"], [("a", "b"), ("b", "a"), ("c", "d"), ("d", "c")]
    )
    assert is_mixing(two) is False


def test_spec_examples():
    assert (has_weak_spec(golden_mean()), has_spec(golden_mean())) == (True, True)
    squares = NSet.finite([k * k for k in range(1, 8)], approximate=True)
    assert has_weak_spec(build_s_gap(squares)) is None
    assert (has_weak_spec(directed_cycle("2", "2")), has_spec(directed_cycle("2", "2"))) == (True, False)


@pytest.mark.parametrize("name,g", zoo_graphs(20))
def test_spec_is_mixing_and_weak_spec(name, g):
    r = properties(g)
    assert r.spec == (r.is_mixing and r.weak_spec)
    assert r.weak_spec == is_irreducible(g)


def test_trivial_examples():
    assert is_trivial(directed_cycle("1", "2", "3"))
    assert not is_trivial(directed_cycle("1", "1,2", "3"))
    assert not is_trivial(golden_mean())


@pytest.mark.parametrize("name,g", zoo_graphs(20) + [("cycle_singletons", directed_cycle("2", "1", "4"))])
def test_trivial_iff_zero_entropy(name, g):
    h = entropy(g).entropy
    if is_trivial(g):
        assert h == 0.0
    elif is_irreducible(g):
        assert h > 0.0


def test_spec_constants_examples():
    c = spec_constants(golden_mean())
    assert (c.d, c.t) == (1, 1)
    # distinct vertices are adjacent; joining u to u costs the cheapest other block
    assert spec_constants(build_unordered_limited([N, parse_literal("2,5"), N])).t == 1
    assert spec_constants(build_unordered_limited([parse_literal("3"), parse_literal("2,5")])).t == 3
    c = spec_constants(golden_mean(), m=3)
    assert c.r == 3 and c.skipped == ["1"]
    assert spec_constants(directed_cycle("1,4", "2+3k"), m=3).d == 3


def test_spec_constants_need_irreducible():
    two = SGraph.from_named([(v, N) for v in "abcd"], [("a", "b"), ("b", "a"), ("c", "d"), ("d", "c")])
    with pytest.raises(NotWeaklySpecifiedError):
        spec_constants(two)


MIXING = [(n, g) for n, g in zoo_graphs(10) if is_mixing(g)]


@pytest.mark.parametrize("name,g", MIXING)
def test_mixing_witness(name, g):
    words = enum_words(g, 5)
    rng = random.Random(5)
    pairs = [(rng.choice(words), rng.choice(words)) for _ in range(6)]
    for alpha, beta in pairs:
        ok = set(connecting_lengths(g, alpha, beta, 64 + 16))
        assert any(all(n in ok for n in range(N0, N0 + 17)) for N0 in range(65)), (alpha, beta)


def test_connecting_lengths_sees_parity_for_non_mixing():
    g = directed_cycle("1", "1")
    ok = connecting_lengths(g, (0,), (0,), 20)
    assert ok and all(n % 2 == 1 for n in ok)
    assert not any(all(n in ok for n in range(N0, N0 + 17)) for N0 in range(4))
