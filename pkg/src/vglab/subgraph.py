"""H-copy detection, enumeration, counting, packing, and component recognizers.

A *copy* of H in G is identified with the edge set that an embedding maps H's
edges onto, so the symmetric images of one embedding collapse to one copy:
#embeddings = #copies * |Aut(H)|. Enumeration is plain backtracking with
degree and adjacency pruning, in lexicographic order of the mapped vertices,
which keeps test output deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from typing import Iterator, Optional, Sequence

from . import catalog
from .graph import Graph

MAX_PATTERN_VERTICES = 12
EXACT_PACKING_COPY_LIMIT = 5000


class PatternTooLarge(ValueError):
    pass


@dataclass(frozen=True)
class CopyEmbedding:
    """An injective edge-preserving map V(H) -> V(G), stored as an image tuple."""

    mapping: tuple[int, ...]  # mapping[h_vertex] = g_vertex

    @property
    def vertex_set(self) -> frozenset[int]:
        return frozenset(self.mapping)

    def image_edges(self, h: Graph) -> frozenset[tuple[int, int]]:
        out = set()
        for a, b in h.edges:
            u, v = self.mapping[a], self.mapping[b]
            out.add((u, v) if u < v else (v, u))
        return frozenset(out)


def iter_embeddings(g: Graph, h: Graph, forbidden_mask: int = 0) -> Iterator[tuple[int, ...]]:
    """Yield embeddings of h into g in lexicographic order of the image tuple.

    Vertices in forbidden_mask are excluded from images (used by the disjoint
    packing search).
    """
    hn, gn = h.n, g.n
    if hn > gn:
        return
    if hn == 0:
        yield ()
        return
    hadj = h.adj_mask
    gadj = g.adj_mask
    hdeg = [h.degree(v) for v in range(hn)]
    gdeg = [g.degree(v) for v in range(gn)]
    image = [0] * hn
    used = 0

    # earlier h-neighbors of each h-vertex, available when it gets mapped
    prev_nbrs = [[u for u in range(v) if hadj[v] >> u & 1] for v in range(hn)]

    def extend(v: int) -> Iterator[tuple[int, ...]]:
        nonlocal used
        if v == hn:
            yield tuple(image)
            return
        need = hdeg[v]
        cand_mask = ~ (used | forbidden_mask)
        for w in range(gn):
            if not (cand_mask >> w & 1) or gdeg[w] < need:
                continue
            ok = True
            for u in prev_nbrs[v]:
                if not (gadj[w] >> image[u] & 1):
                    ok = False
                    break
            if not ok:
                continue
            image[v] = w
            used |= 1 << w
            yield from extend(v + 1)
            used &= ~(1 << w)

    yield from extend(0)


def enumerate_copies(g: Graph, h: Graph, limit: Optional[int] = None) -> list[CopyEmbedding]:
    """All embeddings (up to `limit`) in deterministic lexicographic order."""
    if h.n > MAX_PATTERN_VERTICES:
        raise PatternTooLarge(f"pattern has {h.n} > {MAX_PATTERN_VERTICES} vertices")
    out = []
    for image in iter_embeddings(g, h):
        out.append(CopyEmbedding(image))
        if limit is not None and len(out) >= limit:
            break
    return out


def contains_copy(g: Graph, h: Graph) -> bool:
    for _ in iter_embeddings(g, h):
        return True
    return False


def automorphism_count(h: Graph) -> int:
    """|Aut(H)| by embedding search of H into itself."""
    if h.n > MAX_PATTERN_VERTICES:
        raise PatternTooLarge(f"pattern has {h.n} > {MAX_PATTERN_VERTICES} vertices")
    # an injective edge-preserving self-map on equal vertex/edge counts is an
    # automorphism
    return sum(1 for _ in iter_embeddings(h, h))


def count_copies(g: Graph, h: Graph) -> int:
    """Number of distinct H-copies: embeddings / |Aut(H)|."""
    emb = len(enumerate_copies(g, h))
    aut = automorphism_count(h)
    assert emb % aut == 0
    return emb // aut


def copy_vertex_sets(g: Graph, h: Graph) -> list[frozenset[int]]:
    """Distinct vertex sets spanned by H-copies, sorted for determinism."""
    seen = {e.vertex_set for e in enumerate_copies(g, h)}
    return sorted(seen, key=sorted)


def distinct_copies(g: Graph, h: Graph) -> list[tuple[frozenset[int], frozenset[tuple[int, int]]]]:
    """Distinct copies as (vertex set, edge set) pairs, sorted for determinism."""
    seen = {}
    for emb in enumerate_copies(g, h):
        seen.setdefault(emb.image_edges(h), emb.vertex_set)
    return sorted(((v, e) for e, v in seen.items()),
                  key=lambda p: (sorted(p[0]), sorted(p[1])))


def induced_contains(g: Graph, vertex_set, h: Graph) -> bool:
    """True iff G[S] contains an H-copy; the builder's win predicate."""
    vs = sorted(set(vertex_set))
    if len(vs) < h.n:
        return False
    return contains_copy(g.induced(vs), h)


def has_dangerous_edge(g: Graph, h: Graph) -> tuple[bool, Optional[tuple[int, int]]]:
    """Whether some edge lies in >= 2 distinct H-copies (with a witness edge)."""
    per_edge: dict[tuple[int, int], set] = {}
    for vset, eset in distinct_copies(g, h):
        for e in eset:
            hits = per_edge.setdefault(e, set())
            hits.add(eset)
            if len(hits) >= 2:
                return True, e
    return False, None


def max_disjoint_copies(g: Graph, h: Graph, want: int) -> tuple[list[frozenset[int]], bool]:
    """Up to `want` pairwise vertex-disjoint copies; returns (copies, exact).

    Exact branch-and-bound when the copy list is small, greedy otherwise
    (flagged by exact=False).
    """
    vsets = copy_vertex_sets(g, h)
    if not vsets or want <= 0:
        return [], True
    masks = [sum(1 << v for v in s) for s in vsets]
    if len(masks) > EXACT_PACKING_COPY_LIMIT:
        chosen, used = [], 0
        for i, m in enumerate(masks):
            if not (m & used):
                chosen.append(vsets[i])
                used |= m
                if len(chosen) >= want:
                    break
        return chosen, False
    best: list[int] = []

    def search(start: int, used: int, picked: list[int]) -> bool:
        nonlocal best
        if len(picked) > len(best):
            best = picked.copy()
            if len(best) >= want:
                return True
        if len(picked) + (len(masks) - start) <= len(best):
            return False
        for i in range(start, len(masks)):
            if masks[i] & used:
                continue
            picked.append(i)
            if search(i + 1, used | masks[i], picked):
                return True
            picked.pop()
        return False

    search(0, 0, [])
    return [vsets[i] for i in best[:want]], True


# -- isomorphism and canonical forms -----------------------------------------


def _degree_profile(g: Graph):
    return sorted((g.degree(v), tuple(sorted(g.degree(w) for w in g.adj[v])))
                  for v in range(g.n))


def is_isomorphic(g1: Graph, g2: Graph) -> bool:
    if g1.n != g2.n or g1.m != g2.m:
        return False
    if _degree_profile(g1) != _degree_profile(g2):
        return False
    # equal counts make any embedding a full isomorphism
    for _ in iter_embeddings(g2, g1):
        return True
    return g1.n == 0


def canonical_form(g: Graph) -> tuple:
    """Minimum adjacency bit string over all vertex permutations (n <= 10)."""
    if g.n > 10:
        raise PatternTooLarge("canonical_form is exhaustive and capped at 10 vertices")
    best = None
    for perm in permutations(range(g.n)):
        bits = 0
        ok = True
        for u, v in g.edges:
            a, b = perm[u], perm[v]
            if a > b:
                a, b = b, a
            bits |= 1 << (a * g.n + b)
            if best is not None and bits > best:
                ok = False
                break
        if ok and (best is None or bits < best):
            best = bits
    return (g.n, best if best is not None else 0)


# -- component recognizers ----------------------------------------------------


@dataclass(frozen=True)
class ComponentTag:
    kind: str                 # TTT | DD | DDt | K3Cycle | FeasibleA/B/C | Tree | Other
    t: Optional[int] = None   # parameter for DDt / K3Cycle

    def __str__(self) -> str:
        return f"{self.kind}({self.t})" if self.t is not None else self.kind


def recognize_component(gamma: Graph) -> ComponentTag:
    """Tag a connected graph against the catalog (DD_2 reports as DD)."""
    if not gamma.is_connected():
        raise ValueError("recognize_component expects a connected graph")
    n, m = gamma.n, gamma.m
    if m == n - 1:
        return ComponentTag("Tree")
    if n == 5 and m == 7 and is_isomorphic(gamma, catalog.ttt_graph()):
        return ComponentTag("TTT")
    if n == 7 and m == 10 and is_isomorphic(gamma, catalog.dd_graph()):
        return ComponentTag("DD")
    # DD_t: 2t+3 vertices, 3t+4 edges
    if n >= 9 and n % 2 == 1 and m == 3 * (n - 3) // 2 + 4:
        t = (n - 3) // 2
        if is_isomorphic(gamma, catalog.ddt_graph(t)):
            return ComponentTag("DDt", t)
    # K3-cycle: 2t vertices, 3t edges
    if n >= 6 and n % 2 == 0 and m == 3 * n // 2:
        t = n // 2
        if is_isomorphic(gamma, catalog.k3_cycle_graph(t)):
            return ComponentTag("K3Cycle", t)
    if n == 9 and m == 12:
        if is_isomorphic(gamma, catalog.feasible_a_graph()):
            return ComponentTag("FeasibleA")
        if is_isomorphic(gamma, catalog.feasible_c_graph()):
            return ComponentTag("FeasibleC")
    if n == 7 and m == 9 and is_isomorphic(gamma, catalog.feasible_b_graph()):
        return ComponentTag("FeasibleB")
    return ComponentTag("Other")


def find_embedding_of(g: Graph, h: Graph) -> Optional[tuple[int, ...]]:
    """First embedding of h in g, or None."""
    for image in iter_embeddings(g, h):
        return image
    return None


# -- fast detectors for sparse random graphs ----------------------------------
#
# The experiment harness needs H-free checks on graphs with thousands of
# vertices, where generic backtracking from vertex 0 is wasteful. These
# detectors work edge-first on adjacency masks.


def contains_triangle_mask(adj: Sequence[int], edges) -> bool:
    for u, v in edges:
        if adj[u] & adj[v]:
            return True
    return False


def _diamond_hats(adj: Sequence[int], edges, forbidden: int = 0):
    """Yield (apex x, hat mask {y,z1,z2}) for every diamond with apex x.

    A hat at x is a neighbor y plus two common neighbors z1,z2 of x and y;
    {x,y,z1,z2} then spans a K4 minus the z1z2 edge (extra edges are fine
    since containment is as a subgraph). Vertices in `forbidden` are skipped.
    """
    banned = forbidden
    for u, v in edges:
        if banned >> u & 1 or banned >> v & 1:
            continue
        common = adj[u] & adj[v] & ~banned
        if common.bit_count() < 2:
            continue
        zs = _bits(common)
        for i in range(len(zs)):
            for j in range(i + 1, len(zs)):
                zz = (1 << zs[i]) | (1 << zs[j])
                yield u, (1 << v) | zz
                yield v, (1 << u) | zz


def find_double_diamond(adj: Sequence[int], edges, forbidden: int = 0) -> Optional[tuple[int, int]]:
    """Find a DD as (center, vertex mask incl. center), or None.

    A DD is two hats at one apex that are disjoint outside the apex.
    """
    hats: dict[int, list[int]] = {}
    for x, hat in _diamond_hats(adj, edges, forbidden):
        lst = hats.setdefault(x, [])
        for other in lst:
            if not (other & hat):
                return x, other | hat | (1 << x)
        if hat not in lst:
            lst.append(hat)
    return None


def contains_double_diamond(adj: Sequence[int], edges) -> bool:
    return find_double_diamond(adj, edges) is not None


def _all_dd_masks(adj: Sequence[int], edges, cap: int = 20000) -> list[int]:
    """Distinct DD vertex masks (dedup by mask); raises if `cap` is exceeded."""
    hats: dict[int, list[int]] = {}
    out: set[int] = set()
    for x, hat in _diamond_hats(adj, edges):
        lst = hats.setdefault(x, [])
        for other in lst:
            if not (other & hat):
                out.add(other | hat | (1 << x))
                if len(out) > cap:
                    raise PatternTooLarge("too many double-diamond copies to enumerate")
        if hat not in lst:
            lst.append(hat)
    return sorted(out)


def has_two_disjoint_dds(adj: Sequence[int], edges) -> bool:
    """Exact decision: does the graph contain two vertex-disjoint DD-copies?

    Fast path: take any DD-copy A and search for a DD avoiding V(A). If that
    fails, every DD-copy meets A, so the remaining candidates are few; try
    each distinct copy B and search for a DD avoiding V(B).
    """
    first = find_double_diamond(adj, edges)
    if first is None:
        return False
    _, amask = first
    if find_double_diamond(adj, edges, forbidden=amask) is not None:
        return True
    for bmask in _all_dd_masks(adj, edges):
        if find_double_diamond(adj, edges, forbidden=bmask) is not None:
            return True
    return False


def find_two_disjoint_dds(g: Graph) -> Optional[tuple[frozenset[int], frozenset[int]]]:
    """Two vertex-disjoint DD-copies in g as vertex sets, or None."""
    edges = g.sorted_edges()
    adj = g.adj_mask
    first = find_double_diamond(adj, edges)
    if first is None:
        return None
    _, amask = first
    second = find_double_diamond(adj, edges, forbidden=amask)
    if second is not None:
        return frozenset(_bits(amask)), frozenset(_bits(second[1]))
    for bmask in _all_dd_masks(adj, edges):
        other = find_double_diamond(adj, edges, forbidden=bmask)
        if other is not None:
            return frozenset(_bits(bmask)), frozenset(_bits(other[1]))
    return None


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        b = mask & -mask
        out.append(b.bit_length() - 1)
        mask ^= b
    return out
