"""Set-equipped graphs: data model, file format, connectivity and cycles."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import CycleCapError, EmptyShiftError, SchemaError
from .nset import NSet

DEFAULT_CYCLE_CAP = 10**6


@dataclass(frozen=True)
class SGraph:
    """A finite simple digraph with a nonempty subset of N on every vertex.

    Vertices are identified by index; ``names[i]`` and ``sets[i]`` describe
    vertex ``i``.  The vertex order is the document order and fixes the row
    order of every matrix built from the graph.
    """

    names: tuple
    sets: tuple
    edges: frozenset

    def __post_init__(self):
        names = tuple(str(n) for n in self.names)
        if len(set(names)) != len(names):
            raise SchemaError("duplicate vertex name")
        if len(self.sets) != len(names):
            raise SchemaError("every vertex needs exactly one set")
        edges = frozenset((int(u), int(v)) for u, v in self.edges)
        p = len(names)
        for u, v in edges:
            if u == v:
                raise SchemaError(f"loop at vertex {names[u]!r}")
            if not (0 <= u < p and 0 <= v < p):
                raise SchemaError("edge endpoint out of range")
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "sets", tuple(self.sets))
        object.__setattr__(self, "edges", edges)

    @classmethod
    def from_named(cls, vertices: Sequence, edges: Iterable) -> "SGraph":
        """Build from ``[(name, NSet), ...]`` and ``[(name, name), ...]``."""
        names = [n for n, _ in vertices]
        index = {}
        for i, n in enumerate(names):
            if n in index:
                raise SchemaError(f"duplicate vertex name {n!r}")
            index[n] = i
        idx_edges = set()
        for a, b in edges:
            if a not in index or b not in index:
                raise SchemaError(f"unknown vertex in edge ({a!r}, {b!r})")
            if a == b:
                raise SchemaError(f"loop at vertex {a!r}")
            idx_edges.add((index[a], index[b]))
        return cls(tuple(names), tuple(s for _, s in vertices), frozenset(idx_edges))

    def __len__(self) -> int:
        return len(self.names)

    @property
    def is_empty(self) -> bool:
        return len(self.names) == 0

    def index(self, name: str) -> int:
        try:
            return self.names.index(str(name))
        except ValueError:
            raise SchemaError(f"unknown vertex {name!r}") from None

    def successors(self, u: int) -> list:
        return sorted(v for a, v in self.edges if a == u)

    def predecessors(self, v: int) -> list:
        return sorted(a for a, b in self.edges if b == v)

    def adjacency(self) -> np.ndarray:
        A = np.zeros((len(self), len(self)), dtype=np.int64)
        for u, v in self.edges:
            A[u, v] = 1
        return A

    def sorted_edges(self) -> list:
        return sorted(self.edges)

    @property
    def approximate(self) -> bool:
        return any(s.approximate for s in self.sets)

    def with_sets(self, sets: Sequence[NSet]) -> "SGraph":
        return SGraph(self.names, tuple(sets), self.edges)

    def subgraph(self, keep: Sequence[int]) -> "SGraph":
        keep = sorted(keep)
        pos = {v: i for i, v in enumerate(keep)}
        edges = {(pos[u], pos[v]) for u, v in self.edges if u in pos and v in pos}
        return SGraph(tuple(self.names[v] for v in keep), tuple(self.sets[v] for v in keep), frozenset(edges))

    # -- serialization -------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "vertices": [{"name": n, "set": s.to_json()} for n, s in zip(self.names, self.sets)],
            "edges": [[self.names[u], self.names[v]] for u, v in self.sorted_edges()],
        }


def parse_sgraph(text) -> SGraph:
    """Parse a graph document (JSON text or an already-decoded dict)."""
    if isinstance(text, (str, bytes)):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"invalid JSON: {exc}") from None
    else:
        doc = text
    if not isinstance(doc, dict) or "vertices" not in doc or "edges" not in doc:
        raise SchemaError("graph document needs 'vertices' and 'edges'")
    vertices = []
    for v in doc["vertices"]:
        if not isinstance(v, dict) or "name" not in v or "set" not in v:
            raise SchemaError("each vertex needs 'name' and 'set'")
        vertices.append((str(v["name"]), NSet.from_json(v["set"])))
    edges = []
    for e in doc["edges"]:
        if not isinstance(e, (list, tuple)) or len(e) != 2:
            raise SchemaError("each edge must be a [from, to] pair")
        edges.append((str(e[0]), str(e[1])))
    if len(set(edges)) != len(edges):
        raise SchemaError("duplicate edge")
    return SGraph.from_named(vertices, edges)


def serialize_sgraph(g: SGraph) -> str:
    return json.dumps(g.to_json(), indent=2)


def load_sgraph(path) -> SGraph:
    with open(path, encoding="utf-8") as fh:
        return parse_sgraph(fh.read())


# -- structure ---------------------------------------------------------------


def essentialize(g: SGraph) -> SGraph:
    """Drop vertices with no in-edge or no out-edge until none remain."""
    alive = set(range(len(g)))
    changed = True
    while changed:
        changed = False
        for v in sorted(alive):
            has_in = any(u in alive for u, w in g.edges if w == v)
            has_out = any(w in alive for u, w in g.edges if u == v)
            if not (has_in and has_out):
                alive.discard(v)
                changed = True
    if len(alive) == len(g):
        return g
    return g.subgraph(sorted(alive))


def require_nonempty(g: SGraph) -> SGraph:
    """Essentialize, raising :class:`EmptyShiftError` if nothing survives."""
    e = essentialize(g)
    if e.is_empty:
        raise EmptyShiftError("empty shift: the essential graph has no vertices")
    return e


def strongly_connected_components(n: int, edges: Iterable) -> list:
    """Tarjan's algorithm, iterative.  Components come out sorted internally
    and ordered by their smallest vertex."""
    succ = [[] for _ in range(n)]
    for u, v in edges:
        succ[u].append(v)
    for s in succ:
        s.sort()
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list = []
    comps = []
    counter = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        while work:
            v, i = work.pop()
            if i == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            recurse = False
            for j in range(i, len(succ[v])):
                w = succ[v][j]
                if index[w] == -1:
                    work.append((v, j + 1))
                    work.append((w, 0))
                    recurse = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if recurse:
                continue
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                comps.append(sorted(comp))
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
    comps.sort(key=lambda c: c[0])
    return comps


def cyclic_components(g: SGraph) -> list:
    """Strongly connected components that contain at least one cycle."""
    comps = strongly_connected_components(len(g), g.edges)
    return [c for c in comps if len(c) > 1]


def is_irreducible(g: SGraph) -> bool:
    if g.is_empty:
        raise EmptyShiftError("empty shift")
    comps = strongly_connected_components(len(g), g.edges)
    return len(comps) == 1 and (len(g) > 1)


def is_directed_cycle(g: SGraph) -> bool:
    p = len(g)
    if p < 2 or len(g.edges) != p:
        return False
    return all(len(g.successors(v)) == 1 and len(g.predecessors(v)) == 1 for v in range(p)) and is_irreducible(g)


# -- cycles ------------------------------------------------------------------


def simple_cycles(g: SGraph, cap: int = DEFAULT_CYCLE_CAP) -> list:
    """All simple directed cycles as tuples of vertex indices.

    Johnson-style search: for each start vertex ``s`` (in index order) find the
    cycles through ``s`` whose other vertices are all larger than ``s``, inside
    the strongly connected component of ``s`` in the subgraph on ``{s, s+1, ...}``.
    Each cycle is therefore produced once, already rotated so its smallest
    vertex comes first.
    """
    p = len(g)
    succ = [g.successors(v) for v in range(p)]
    out: list = []
    for s in range(p):
        sub_edges = [(u, v) for u, v in g.edges if u >= s and v >= s]
        comp = next(
            (c for c in strongly_connected_components(p, sub_edges) if s in c),
            [s],
        )
        if len(comp) < 2:
            continue
        allowed = set(comp)
        blocked = {v: False for v in allowed}
        bmap = {v: set() for v in allowed}
        path = [s]
        blocked[s] = True

        def unblock(u):
            todo = [u]
            while todo:
                w = todo.pop()
                if blocked[w]:
                    blocked[w] = False
                    todo.extend(bmap[w])
                    bmap[w].clear()

        # iterative version of Johnson's CIRCUIT routine
        stack = [(s, iter([w for w in succ[s] if w in allowed]))]
        closed = [False]
        while stack:
            v, it = stack[-1]
            advanced = False
            for w in it:
                if w == s:
                    out.append(tuple(path))
                    if len(out) > cap:
                        raise CycleCapError(f"more than {cap} simple cycles")
                    closed[-1] = True
                elif not blocked[w]:
                    path.append(w)
                    blocked[w] = True
                    stack.append((w, iter([x for x in succ[w] if x in allowed])))
                    closed.append(False)
                    advanced = True
                    break
            if advanced:
                continue
            stack.pop()
            found = closed.pop()
            if found:
                unblock(v)
            else:
                for w in succ[v]:
                    if w in allowed:
                        bmap[w].add(v)
            path.pop()
            if closed:
                closed[-1] = closed[-1] or found
    out.sort(key=lambda c: (len(c), c))
    return out


def disjoint_cycle_families(g: SGraph, cap: int = DEFAULT_CYCLE_CAP) -> list:
    """Every nonempty set of pairwise vertex-disjoint simple cycles."""
    cycles = simple_cycles(g, cap)
    masks = []
    for c in cycles:
        m = 0
        for v in c:
            m |= 1 << v
        masks.append(m)
    families: list = []

    def extend(start, used, chosen):
        for i in range(start, len(cycles)):
            if masks[i] & used:
                continue
            chosen.append(cycles[i])
            families.append(tuple(chosen))
            if len(families) > cap:
                raise CycleCapError(f"more than {cap} disjoint cycle families")
            extend(i + 1, used | masks[i], chosen)
            chosen.pop()

    extend(0, 0, [])
    return families


# -- builders ------------------------------------------------------------------


def build_s_gap(S: Optional[NSet], contains_zero: bool = False) -> SGraph:
    """The S-gap shift for ``S ⊆ N0`` given as ``(contains_zero, S ∩ N)``.

    Vertex "0" carries the gap lengths and vertex "1" the runs of ones: runs
    of 1 have length exactly 1 unless gaps of length 0 are allowed, in which
    case they may be arbitrarily long.
    """
    if S is None:
        raise SchemaError("S = {0} leaves no positive gap lengths")
    ones = NSet.naturals() if contains_zero else NSet.finite([1])
    return SGraph(("0", "1"), (S, ones), frozenset({(0, 1), (1, 0)}))


def build_ss_gap(S: NSet, S_prime: NSet) -> SGraph:
    """The (S, S')-gap shift: runs of 0 from ``S``, runs of 1 from ``S_prime``."""
    return SGraph(("0", "1"), (S, S_prime), frozenset({(0, 1), (1, 0)}))


def build_ordered_limited(sets: Sequence[NSet]) -> SGraph:
    """Directed cycle 1 -> 2 -> ... -> n -> 1."""
    n = len(sets)
    if n < 2:
        raise SchemaError("need at least two sets")
    names = tuple(str(i + 1) for i in range(n))
    return SGraph(names, tuple(sets), frozenset((i, (i + 1) % n) for i in range(n)))


def build_unordered_limited(sets: Sequence[NSet]) -> SGraph:
    """Complete digraph without loops."""
    n = len(sets)
    if n < 2:
        raise SchemaError("need at least two sets")
    names = tuple(str(i + 1) for i in range(n))
    return SGraph(names, tuple(sets), frozenset((i, j) for i in range(n) for j in range(n) if i != j))
