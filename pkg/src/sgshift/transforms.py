"""Entropy-preserving graph operations and lifting to more letters.

Every operation adds exactly one vertex ``v'`` next to the site ``v`` and
returns the new graph together with a :class:`TransformRecord`.  The
``conjugacy`` field is "yes" only under a known sufficient condition, "no"
only when the fixed-point count changes (fixed points are a conjugacy
invariant), and "unknown" otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

from .errors import DecompositionError, InvariantError, ObstructionError, SGSError
from .graph import SGraph, essentialize, is_directed_cycle, is_irreducible
from .nset import NSet, format_literal, ns_difference, ns_direct_sum_check, ns_disjoint_union_check


@dataclass
class TransformRecord:
    kind: str
    site: str
    parameters: dict
    conjugacy: str
    new_vertex: str
    p1_before: Optional[int] = None
    p1_after: Optional[int] = None
    notes: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "site": self.site,
            "parameters": self.parameters,
            "conjugacy": self.conjugacy,
            "new_vertex": self.new_vertex,
            "p1_before": self.p1_before,
            "p1_after": self.p1_after,
            "notes": list(self.notes),
        }


def _p1(g: SGraph) -> Optional[int]:
    e = essentialize(g)
    if e.approximate:
        return None
    return sum(1 for S in e.sets if not S.is_finite)


def fresh_name(g: SGraph, site: str) -> str:
    """``site'``, then ``site'2``, ``site'3``, ... on collision."""
    taken = set(g.names)
    name = site + "'"
    k = 2
    while name in taken:
        name = f"{site}'{k}"
        k += 1
    return name


def _site(g: SGraph, v) -> int:
    return g.index(v) if isinstance(v, str) else int(v)


def _finish(g: SGraph, new: SGraph, rec: TransformRecord) -> tuple:
    rec.p1_before, rec.p1_after = _p1(g), _p1(new)
    if rec.p1_before is not None and rec.p1_after is not None and rec.p1_before != rec.p1_after:
        rec.conjugacy = "no"
        rec.notes.append(f"fixed points change from {rec.p1_before} to {rec.p1_after}")
    return new, rec


def _with_vertex(g: SGraph, name: str, S: NSet, site: int, S_site: NSet, edges: Iterable) -> SGraph:
    sets = list(g.sets)
    sets[site] = S_site
    return SGraph(g.names + (name,), tuple(sets) + (S,), frozenset(edges))


def edge_extend(g: SGraph, v, T1: NSet, T2: NSet, horizon: Optional[int] = None) -> tuple:
    """Split ``S_v = T1 (+) T2`` across a new edge ``v -> v'``.

    ``v`` keeps its in-edges and the set ``T1``; ``v'`` takes over the
    out-edges of ``v`` and gets ``T2``.
    """
    i = _site(g, v)
    Sv = g.sets[i]
    verdict = ns_direct_sum_check(T1, T2, Sv, horizon)
    if verdict is None:
        raise DecompositionError("direct sum could not be decided (approximate set or horizon too small)")
    if not verdict:
        raise DecompositionError(f"{format_literal(Sv)} is not the direct sum of {format_literal(T1)} and {format_literal(T2)}")
    name = fresh_name(g, g.names[i])
    j = len(g)
    edges = set()
    for a, b in g.edges:
        if a == i:
            edges.add((j, b))
        else:
            edges.add((a, b))
    edges.add((i, j))
    new = _with_vertex(g, name, T2, i, T1, edges)
    single = T1.is_finite and len(T1.head) == 1 or T2.is_finite and len(T2.head) == 1
    if single:
        conj = "yes"
    elif Sv.is_finite:
        conj = "yes"
    else:
        conj = "unknown"
    rec = TransformRecord(
        "edge_extend", g.names[i], {"T1": format_literal(T1), "T2": format_literal(T2)}, conj, name,
    )
    return _finish(g, new, rec)


def _neighbor_partition(g: SGraph, neighbors: set, E1, E2) -> tuple:
    A = {_site(g, x) for x in E1}
    B = {_site(g, x) for x in E2}
    if not A or not B:
        raise DecompositionError("both sides of the partition must be nonempty")
    if A & B or (A | B) != neighbors:
        raise DecompositionError("E1, E2 must partition the neighbors of the vertex")
    return A, B


def out_split(g: SGraph, v, E1, E2) -> tuple:
    """Out-split ``v``: ``v`` keeps out-edges to ``E1``, ``v'`` gets those to ``E2``;
    both receive every in-edge of ``v``."""
    i = _site(g, v)
    A, B = _neighbor_partition(g, set(g.successors(i)), E1, E2)
    name = fresh_name(g, g.names[i])
    j = len(g)
    edges = set()
    for a, b in g.edges:
        if a == i:
            edges.add((i if b in A else j, b))
        elif b == i:
            edges.add((a, i))
            edges.add((a, j))
        else:
            edges.add((a, b))
    new = _with_vertex(g, name, g.sets[i], i, g.sets[i], edges)
    conj = "yes" if g.sets[i].is_finite and not g.sets[i].approximate else "unknown"
    rec = TransformRecord(
        "out_split", g.names[i],
        {"E1": sorted(g.names[x] for x in A), "E2": sorted(g.names[x] for x in B)}, conj, name,
    )
    return _finish(g, new, rec)


def in_split(g: SGraph, v, E1, E2) -> tuple:
    """In-split ``v``: edges from ``E1`` go to ``v``, from ``E2`` to ``v'``;
    both keep every out-edge of ``v``."""
    i = _site(g, v)
    A, B = _neighbor_partition(g, set(g.predecessors(i)), E1, E2)
    name = fresh_name(g, g.names[i])
    j = len(g)
    edges = set()
    for a, b in g.edges:
        if b == i:
            edges.add((a, i if a in A else j))
        elif a == i:
            edges.add((i, b))
            edges.add((j, b))
        else:
            edges.add((a, b))
    new = _with_vertex(g, name, g.sets[i], i, g.sets[i], edges)
    conj = "yes" if g.sets[i].is_finite and not g.sets[i].approximate else "unknown"
    rec = TransformRecord(
        "in_split", g.names[i],
        {"E1": sorted(g.names[x] for x in A), "E2": sorted(g.names[x] for x in B)}, conj, name,
    )
    return _finish(g, new, rec)


def vertex_clone(g: SGraph, v, S1: Optional[NSet], S2: Optional[NSet]) -> tuple:
    """Clone ``v`` with ``S_v = S1 ⊔ S2``; ``v'`` copies all edges of ``v``."""
    i = _site(g, v)
    if S1 is None or S2 is None:
        raise DecompositionError("both parts of the partition must be nonempty")
    if not ns_disjoint_union_check(S1, S2, g.sets[i]):
        raise DecompositionError(
            f"{format_literal(S1)} and {format_literal(S2)} do not partition {format_literal(g.sets[i])}"
        )
    name = fresh_name(g, g.names[i])
    j = len(g)
    edges = set(g.edges)
    for a, b in g.edges:
        if a == i:
            edges.add((j, b))
        if b == i:
            edges.add((a, j))
    new = _with_vertex(g, name, S2, i, S1, edges)
    conj = "yes" if S1.is_finite or S2.is_finite else "unknown"
    rec = TransformRecord("clone", g.names[i], {"S1": format_literal(S1), "S2": format_literal(S2)}, conj, name)
    return _finish(g, new, rec)


def _split_min(S: NSet) -> tuple:
    m = S.min
    return NSet.finite([m]), ns_difference(S, NSet.finite([m]))


def lift_obstruction(g: SGraph, q: int) -> bool:
    """Directed cycle of singletons whose elements sum to less than ``q``."""
    return (
        is_directed_cycle(g)
        and all(S.is_finite and len(S.head) == 1 for S in g.sets)
        and sum(S.head[0] for S in g.sets) < q
    )


def lift(g: SGraph, q: int) -> tuple:
    """A conjugate S-graph on exactly ``q`` vertices, or :class:`ObstructionError`.

    Each step applies the first rule that fits, at the lowest-index vertex:
    clone an infinite set as ``{min} ⊔ rest``; out-split a vertex with two or
    more out-neighbors; clone a non-singleton finite set; edge-extend a
    singleton ``{s}`` (``s > 1``) as ``{1} (+) {s-1}``.
    """
    if g.is_empty or not is_irreducible(g):
        raise SGSError("lift needs a nonempty irreducible graph")
    if g.approximate:
        raise SGSError("lift needs exact sets")
    if q <= len(g):
        raise SGSError(f"target {q} must exceed the current number of vertices {len(g)}")
    if lift_obstruction(g, q):
        total = sum(S.head[0] for S in g.sets)
        raise ObstructionError(
            f"obstruction: directed cycle of singletons with total {total} < {q}; "
            f"no conjugate S-graph shift on {q} letters exists"
        )
    records = []
    while len(g) < q:
        infinite = [i for i, S in enumerate(g.sets) if not S.is_finite]
        if infinite:
            i = infinite[0]
            g, rec = vertex_clone(g, i, *_split_min(g.sets[i]))
        elif not is_directed_cycle(g):
            i = next(u for u in range(len(g)) if len(g.successors(u)) >= 2)
            succ = sorted(g.successors(i))
            g, rec = out_split(g, i, succ[:1], succ[1:])
        else:
            multi = [i for i, S in enumerate(g.sets) if len(S.head) > 1]
            if multi:
                i = multi[0]
                g, rec = vertex_clone(g, i, *_split_min(g.sets[i]))
            else:
                i = next(u for u, S in enumerate(g.sets) if S.head[0] > 1)
                s = g.sets[i].head[0]
                g, rec = edge_extend(g, i, NSet.finite([1]), NSet.finite([s - 1]))
        if rec.conjugacy != "yes":
            raise InvariantError(f"lift step {rec.kind} at {rec.site} is not a conjugacy")
        rec.parameters["operation"] = rec.kind
        rec.kind = "lift_step"
        records.append(rec)
    return g, records
