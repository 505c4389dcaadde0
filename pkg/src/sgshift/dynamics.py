"""Decidable dynamical properties of S-graph shifts.

All checks run on the essential graph.  Answers are tri-state: ``None``
stands for "unknown", which is what approximate sets produce whenever the
answer depends on the unseen part of a set.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import reduce
from typing import Optional

from .errors import ApproximateSetError, NotWeaklySpecifiedError
from .graph import (
    DEFAULT_CYCLE_CAP,
    SGraph,
    cyclic_components,
    is_directed_cycle,
    is_irreducible,
    require_nonempty,
    simple_cycles,
)
from .nset import ns_stats


def _and(*vals) -> Optional[bool]:
    """Three-valued conjunction."""
    if any(v is False for v in vals):
        return False
    if any(v is None for v in vals):
        return None
    return True


def is_sft(g: SGraph) -> Optional[bool]:
    """Every set finite or cofinite."""
    g = require_nonempty(g)
    verdicts = []
    for S in g.sets:
        if S.approximate:
            verdicts.append(None)
        else:
            verdicts.append(S.is_finite or S.is_cofinite)
    return _and(*verdicts)


def is_sofic(g: SGraph) -> Optional[bool]:
    """Every gap sequence eventually periodic; automatic for exact sets."""
    g = require_nonempty(g)
    return _and(*(ns_stats(S)["eventually_periodic_gaps"] for S in g.sets))


def cycle_sum_gcd(g: SGraph, cap: int = DEFAULT_CYCLE_CAP) -> int:
    """gcd of all cycle sizes ``sum_{i in C} s_i`` with ``s_i in S_i``.

    For one cycle the sizes form ``sum(min S_i) + (combinations of the
    differences)``, so their gcd is ``gcd(sum min S_i, diff_gcd(S_i) ...)``.
    """
    g = require_nonempty(g)
    if g.approximate:
        raise ApproximateSetError("cycle gcd needs exact sets")
    stats = [ns_stats(S) for S in g.sets]
    total = 0
    for cyc in simple_cycles(g, cap):
        base = sum(stats[v]["min"] for v in cyc)
        total = math.gcd(total, reduce(math.gcd, (stats[v]["diff_gcd"] for v in cyc), base))
    return total


def is_mixing(g: SGraph, cap: int = DEFAULT_CYCLE_CAP) -> Optional[bool]:
    """Irreducible and cycle gcd 1.

    With approximate sets a gcd of 1 on the known elements already settles
    the question; anything else is unknown.
    """
    g = require_nonempty(g)
    if not is_irreducible(g):
        return False
    if not g.approximate:
        return cycle_sum_gcd(g, cap) == 1
    known = g.with_sets([S if not S.approximate else type(S).finite(S.head) for S in g.sets])
    return True if cycle_sum_gcd(known, cap) == 1 else None


def has_weak_spec(g: SGraph) -> Optional[bool]:
    """Irreducible and every set syndetic (bounded gaps)."""
    g = require_nonempty(g)
    if not is_irreducible(g):
        return False
    return _and(*(None if S.approximate else True for S in g.sets))


def has_spec(g: SGraph, cap: int = DEFAULT_CYCLE_CAP) -> Optional[bool]:
    """Mixing and weak specification."""
    g = require_nonempty(g)
    return _and(is_mixing(g, cap), has_weak_spec(g))


def _trivial_block(c: SGraph) -> bool:
    return is_directed_cycle(c) and all(S.is_finite and not S.approximate and len(S.head) == 1 for S in c.sets)


def is_trivial(g: SGraph) -> bool:
    """Every irreducible component is a directed cycle of singleton sets
    (equivalently, for irreducible g, zero entropy)."""
    g = require_nonempty(g)
    return all(_trivial_block(g.subgraph(c)) for c in cyclic_components(g))


@dataclass
class SpecConstants:
    d: int
    t: int
    r: int
    skipped: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {"d": self.d, "t": self.t, "r": self.r, "skipped_vertices": self.skipped}


def spec_constants(g: SGraph, m: int = 1) -> SpecConstants:
    """The constants ``d``, ``t`` and ``r`` of the weak-specification decomposition.

    ``d``: largest gap over all sets.  ``t``: largest over ordered pairs of the
    cheapest walk ``u -> w_1 -> ... -> w_k -> v`` where each interior vertex
    costs ``min S_w``.  ``r``: largest ``min(S_u \\ [1, m-1])``; vertices whose
    set lies inside ``[1, m-1]`` have no such minimum and are skipped (listed in
    ``skipped``).
    """
    g = require_nonempty(g)
    if m < 1:
        raise ValueError("m must be >= 1")
    if g.approximate:
        raise ApproximateSetError("spec constants need exact sets")
    if not is_irreducible(g):
        raise NotWeaklySpecifiedError("not weakly specified: graph is not irreducible")
    stats = [ns_stats(S) for S in g.sets]
    d = max(s["gap_sup"] for s in stats)

    n = len(g)
    INF = math.inf
    D = [[INF] * n for _ in range(n)]
    for u, v in g.edges:
        D[u][v] = 0
    mins = [s["min"] for s in stats]
    for k in range(n):
        for u in range(n):
            if D[u][k] == INF:
                continue
            for v in range(n):
                c = D[u][k] + mins[k] + D[k][v]
                if c < D[u][v]:
                    D[u][v] = c
    t = int(max(max(row) for row in D))

    r = 0
    skipped = []
    for name, S in zip(g.names, g.sets):
        above = [x for x in S.elements(max(m, S.offset) + S.period) if x >= m] if not S.is_finite else [x for x in S.head if x >= m]
        if not above:
            skipped.append(name)
            continue
        r = max(r, above[0])
    return SpecConstants(int(d), t, r, skipped)


@dataclass
class PropertyReport:
    is_sft: Optional[bool]
    is_sofic: Optional[bool]
    is_mixing: Optional[bool]
    weak_spec: Optional[bool]
    spec: Optional[bool]
    is_trivial: bool
    cycle_gcd: Optional[int]
    gap_bound_d: object
    witnesses: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "is_sft": self.is_sft,
            "is_sofic": self.is_sofic,
            "is_mixing": self.is_mixing,
            "weak_spec": self.weak_spec,
            "spec": self.spec,
            "is_trivial": self.is_trivial,
            "cycle_gcd": self.cycle_gcd,
            "gap_bound_d": self.gap_bound_d,
            "witnesses": self.witnesses,
        }


def properties(g: SGraph, cap: int = DEFAULT_CYCLE_CAP) -> PropertyReport:
    """All property checks in one report, with short explanations."""
    g = require_nonempty(g)
    stats = {name: ns_stats(S) for name, S in zip(g.names, g.sets)}
    irreducible = is_irreducible(g)
    gcd = None if g.approximate else cycle_sum_gcd(g, cap)
    gaps = [s["gap_sup"] for s in stats.values()]
    d = None if any(x is None for x in gaps) else max(gaps)
    witnesses = {
        "irreducible": irreducible,
        "neither_finite_nor_cofinite": [n for n, s in stats.items() if not (s["is_finite"] or s["is_cofinite"])],
        "approximate_vertices": [n for n, S in zip(g.names, g.sets) if S.approximate],
        "gap_sup": {n: s["gap_sup"] for n, s in stats.items()},
    }
    mixing = is_mixing(g, cap)
    weak = has_weak_spec(g)
    return PropertyReport(
        is_sft(g), is_sofic(g), mixing, weak, _and(mixing, weak), is_trivial(g), gcd, d, witnesses,
    )
