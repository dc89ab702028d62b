"""Immutable simple undirected graphs on dense 0-based vertices.

The Graph value is the board of every game in this package. Adjacency is kept
both as neighbor tuples and as per-vertex bitmasks, so solvers can test edges
and intersect neighborhoods with integer operations.
"""

from __future__ import annotations

from typing import Iterable, Sequence


class GraphFormatError(ValueError):
    """Raised for malformed edge-list text or invalid edge data."""


class Graph:
    """Immutable simple undirected graph on vertices 0..n-1."""

    __slots__ = ("n", "edges", "adj", "adj_mask", "_hash")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]]):
        if n < 0:
            raise GraphFormatError(f"vertex count must be nonnegative, got {n}")
        norm = set()
        for u, v in edges:
            if u == v:
                raise GraphFormatError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise GraphFormatError(f"edge ({u},{v}) out of range for n={n}")
            if u > v:
                u, v = v, u
            norm.add((u, v))
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "edges", frozenset(norm))
        nbrs: list[list[int]] = [[] for _ in range(n)]
        masks = [0] * n
        for u, v in norm:
            nbrs[u].append(v)
            nbrs[v].append(u)
            masks[u] |= 1 << v
            masks[v] |= 1 << u
        object.__setattr__(self, "adj", tuple(tuple(sorted(x)) for x in nbrs))
        object.__setattr__(self, "adj_mask", tuple(masks))
        object.__setattr__(self, "_hash", hash((n, frozenset(norm))))

    def __setattr__(self, name, value):
        raise AttributeError("Graph is immutable")

    def __copy__(self) -> "Graph":
        return self

    def __deepcopy__(self, memo) -> "Graph":
        return self

    def __reduce__(self):
        return (Graph, (self.n, tuple(self.edges)))

    # -- basic accessors ----------------------------------------------------

    @property
    def m(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def max_degree(self) -> int:
        return max((len(a) for a in self.adj), default=0)

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj_mask[u] >> v & 1) if u != v else False

    def vertices(self) -> range:
        return range(self.n)

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def __eq__(self, other) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self.edges == other.edges

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"

    # -- derived graphs ------------------------------------------------------

    def induced(self, vertices: Iterable[int]) -> "Graph":
        """Induced subgraph relabeled to 0..k-1 (order of sorted(vertices))."""
        vs = sorted(set(vertices))
        index = {v: i for i, v in enumerate(vs)}
        sub = [(index[u], index[v]) for u, v in self.edges if u in index and v in index]
        return Graph(len(vs), sub)

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Image under the permutation perm (vertex v maps to perm[v])."""
        if sorted(perm) != list(range(self.n)):
            raise GraphFormatError("relabel requires a permutation of 0..n-1")
        return Graph(self.n, [(perm[u], perm[v]) for u, v in self.edges])

    def add_edges(self, extra: Iterable[tuple[int, int]]) -> "Graph":
        return Graph(self.n, list(self.edges) + list(extra))

    def components(self) -> list[list[int]]:
        """Connected components as sorted vertex lists, ordered by minimum vertex."""
        seen = [False] * self.n
        out = []
        for s in range(self.n):
            if seen[s]:
                continue
            stack, comp = [s], []
            seen[s] = True
            while stack:
                v = stack.pop()
                comp.append(v)
                for w in self.adj[v]:
                    if not seen[w]:
                        seen[w] = True
                        stack.append(w)
            out.append(sorted(comp))
        return out

    def is_connected(self) -> bool:
        return self.n <= 1 or len(self.components()) == 1

    def is_forest(self) -> bool:
        return all(len(c) - 1 == self._edges_within(c) for c in self.components())

    def is_tree(self) -> bool:
        return self.n >= 1 and self.is_connected() and self.m == self.n - 1

    def _edges_within(self, comp: list[int]) -> int:
        cs = set(comp)
        return sum(1 for u, v in self.edges if u in cs and v in cs)


def empty_graph(n: int) -> Graph:
    return Graph(n, [])


def disjoint_union(graphs: Sequence[Graph]) -> Graph:
    """Disjoint union; vertex blocks keep the input order."""
    n = 0
    edges: list[tuple[int, int]] = []
    for g in graphs:
        edges.extend((u + n, v + n) for u, v in g.sorted_edges())
        n += g.n
    return Graph(n, edges)


# -- text formats -----------------------------------------------------------
#
# Edge-list format: first line "n m", then m lines "u v" with 0 <= u < v < n.
# Lines starting with '#' are ignored.


def parse_graph(text: str) -> Graph:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise GraphFormatError("empty input")
    head = lines[0].split()
    if len(head) != 2:
        raise GraphFormatError(f"header must be 'n m', got {lines[0]!r}")
    try:
        n, m = int(head[0]), int(head[1])
    except ValueError as exc:
        raise GraphFormatError(f"bad header {lines[0]!r}") from exc
    if len(lines) - 1 != m:
        raise GraphFormatError(f"expected {m} edge lines, found {len(lines) - 1}")
    edges = []
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 2:
            raise GraphFormatError(f"malformed edge line {ln!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError as exc:
            raise GraphFormatError(f"malformed edge line {ln!r}") from exc
        if not (0 <= u < v < n):
            raise GraphFormatError(f"edge ({u},{v}) violates 0 <= u < v < n={n}")
        if (u, v) in edges:
            raise GraphFormatError(f"duplicate edge ({u},{v})")
        edges.append((u, v))
    return Graph(n, edges)


def serialize_graph(g: Graph) -> str:
    lines = [f"{g.n} {g.m}"]
    lines.extend(f"{u} {v}" for u, v in g.sorted_edges())
    return "\n".join(lines) + "\n"


def to_dot(g: Graph, name: str = "G") -> str:
    lines = [f"graph {name} {{"]
    lines.extend(f"  {v};" for v in range(g.n))
    lines.extend(f"  {u} -- {v};" for u, v in g.sorted_edges())
    lines.append("}")
    return "\n".join(lines) + "\n"
