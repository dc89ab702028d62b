"""The (H,b) graph deletion algorithm and its stable core.

A deletion step removes, with respect to the current graph, one of:

* a bad vertex: contained in no H-copy;
* a bad edge: contained in no H-copy;
* a bad set U, 2 <= |U| <= b+1: no H-copy meets U in exactly one vertex;
* a small component: at most (b+1)(v(H)-1) vertices.

Iterating to a fixpoint yields the (H,b)-core, independent of the order of
the arbitrary choices; the recorded trace (bad sets U, small components W)
drives the spoiler's extension strategy.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional

import numpy as np

from .graph import Graph
from .subgraph import distinct_copies


class CoreError(ValueError):
    pass


@dataclass(frozen=True)
class DeletionStep:
    kind: str  # bad_vertex | bad_edge | bad_set | small_component
    vertices: tuple[int, ...] = ()
    edge: Optional[tuple[int, int]] = None


@dataclass
class DeletionTrace:
    """Ordered record of one run of the deletion algorithm."""

    n: int
    bad_sets: list[frozenset[int]] = field(default_factory=list)           # U
    small_components: list[frozenset[int]] = field(default_factory=list)   # W
    bad_vertices: list[int] = field(default_factory=list)
    bad_edges: list[tuple[int, int]] = field(default_factory=list)
    steps: list[DeletionStep] = field(default_factory=list)
    core_vertices: frozenset[int] = frozenset()
    core_edges: frozenset[tuple[int, int]] = frozenset()

    def core_graph(self) -> Graph:
        """Core with original labels (deleted vertices become isolated)."""
        return Graph(self.n, sorted(self.core_edges))

    def core_key(self) -> tuple:
        return (tuple(sorted(self.core_vertices)), tuple(sorted(self.core_edges)))

    def core_components(self) -> list[tuple[list[int], Graph]]:
        """(original-label vertex list, relabeled induced subgraph) pairs."""
        g = self.core_graph()
        out = []
        for comp in g.components():
            comp = [v for v in comp if v in self.core_vertices]
            if comp:
                out.append((comp, g.induced(comp)))
        return out

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "steps": [
                {"kind": s.kind,
                 **({"vertices": list(s.vertices)} if s.vertices else {}),
                 **({"edge": list(s.edge)} if s.edge else {})}
                for s in self.steps
            ],
            "bad_sets": [sorted(u) for u in self.bad_sets],
            "small_components": [sorted(w) for w in self.small_components],
            "core_vertices": sorted(self.core_vertices),
            "core_edges": [list(e) for e in sorted(self.core_edges)],
        }


class _Peeler:
    """Incremental state for one run of the deletion algorithm."""

    def __init__(self, g: Graph, h: Graph, b: int):
        if not h.is_connected() or h.n < 2:
            raise CoreError("H must be connected with at least one edge")
        if not (1 <= b <= 4):
            raise CoreError(f"b must be in 1..4, got {b}")
        self.g = g
        self.h = h
        self.b = b
        self.small_cap = (b + 1) * (h.n - 1)
        self.alive_v = set(range(g.n))
        self.alive_adj = list(g.adj_mask)
        self.alive_edges = set(g.edges)
        # distinct copies as (vertex mask, edge set); all initially alive
        self.copies: list[tuple[int, frozenset]] = []
        for vset, eset in distinct_copies(g, h):
            self.copies.append((sum(1 << v for v in vset), eset))
        self.copy_alive = [True] * len(self.copies)
        self.v_count = [0] * g.n
        self.e_count: dict[tuple[int, int], int] = {e: 0 for e in g.edges}
        self.copies_at: list[list[int]] = [[] for _ in range(g.n)]
        for idx, (vmask, eset) in enumerate(self.copies):
            for v in _bits(vmask):
                self.v_count[v] += 1
                self.copies_at[v].append(idx)
            for e in eset:
                self.e_count[e] += 1

    # -- candidate enumeration ------------------------------------------------

    def bad_vertices(self) -> list[int]:
        return sorted(v for v in self.alive_v if self.v_count[v] == 0)

    def bad_edges(self) -> list[tuple[int, int]]:
        return sorted(e for e in self.alive_edges if self.e_count[e] == 0)

    def _is_bad_set(self, uset: tuple[int, ...]) -> bool:
        umask = sum(1 << v for v in uset)
        for v in uset:
            for idx in self.copies_at[v]:
                if self.copy_alive[idx] and (self.copies[idx][0] & umask).bit_count() == 1:
                    return False
        return True

    def bad_sets(self, size: int) -> list[tuple[int, ...]]:
        alive = sorted(self.alive_v)
        return [u for u in combinations(alive, size) if self._is_bad_set(u)]

    def first_bad_set(self, size: int) -> Optional[tuple[int, ...]]:
        alive = sorted(self.alive_v)
        for u in combinations(alive, size):
            if self._is_bad_set(u):
                return u
        return None

    def components(self) -> list[list[int]]:
        seen = set()
        out = []
        for s in sorted(self.alive_v):
            if s in seen:
                continue
            comp, stack = [], [s]
            seen.add(s)
            while stack:
                v = stack.pop()
                comp.append(v)
                m = self.alive_adj[v]
                while m:
                    bbit = m & -m
                    w = bbit.bit_length() - 1
                    m ^= bbit
                    if w not in seen:
                        seen.add(w)
                        stack.append(w)
            out.append(sorted(comp))
        return out

    def small_components(self) -> list[list[int]]:
        return [c for c in self.components() if len(c) <= self.small_cap]

    # -- deletion -------------------------------------------------------------

    def _kill_copies_touching(self, vmask: int) -> None:
        idxs = set()
        for v in _bits(vmask):
            idxs.update(self.copies_at[v])
        for idx in idxs:
            if not self.copy_alive[idx]:
                continue
            cmask, eset = self.copies[idx]
            if cmask & vmask:
                self.copy_alive[idx] = False
                for v in _bits(cmask):
                    self.v_count[v] -= 1
                for e in eset:
                    self.e_count[e] -= 1

    def delete_vertices(self, vs) -> None:
        vmask = sum(1 << v for v in vs)
        self._kill_copies_touching(vmask)
        for v in vs:
            self.alive_v.discard(v)
            m = self.alive_adj[v]
            while m:
                bbit = m & -m
                w = bbit.bit_length() - 1
                m ^= bbit
                self.alive_adj[w] &= ~(1 << v)
                self.alive_edges.discard((min(v, w), max(v, w)))
            self.alive_adj[v] = 0

    def delete_edge(self, e: tuple[int, int]) -> None:
        u, v = e
        # copies through a bad edge are already dead by definition
        self.alive_edges.discard(e)
        self.alive_adj[u] &= ~(1 << v)
        self.alive_adj[v] &= ~(1 << u)
        for idx in self.copies_at[u]:
            if self.copy_alive[idx] and e in self.copies[idx][1]:
                cmask, eset = self.copies[idx]
                self.copy_alive[idx] = False
                for w in _bits(cmask):
                    self.v_count[w] -= 1
                for e2 in eset:
                    self.e_count[e2] -= 1


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        b = mask & -mask
        out.append(b.bit_length() - 1)
        mask ^= b
    return out


_KINDS = ("bad_vertex", "bad_edge", "bad_set", "small_component")


def _pick_step(p: _Peeler, rng: Optional[np.random.Generator]) -> Optional[DeletionStep]:
    """Next deletion step: deterministic policy, or a seeded-random choice."""
    if rng is None:
        vs = p.bad_vertices()
        if vs:
            return DeletionStep("bad_vertex", (vs[0],))
        es = p.bad_edges()
        if es:
            return DeletionStep("bad_edge", edge=es[0])
        for size in range(2, p.b + 2):
            u = p.first_bad_set(size)
            if u is not None:
                return DeletionStep("bad_set", u)
        sc = p.small_components()
        if sc:
            return DeletionStep("small_component", tuple(sc[0]))
        return None
    order = list(_KINDS)
    rng.shuffle(order)
    for kind in order:
        if kind == "bad_vertex":
            vs = p.bad_vertices()
            if vs:
                return DeletionStep("bad_vertex", (vs[rng.integers(len(vs))],))
        elif kind == "bad_edge":
            es = p.bad_edges()
            if es:
                return DeletionStep("bad_edge", edge=es[rng.integers(len(es))])
        elif kind == "bad_set":
            sizes = list(range(2, p.b + 2))
            rng.shuffle(sizes)
            for size in sizes:
                us = p.bad_sets(size)
                if us:
                    return DeletionStep("bad_set", us[rng.integers(len(us))])
        else:
            sc = p.small_components()
            if sc:
                return DeletionStep("small_component", tuple(sc[rng.integers(len(sc))]))
    return None


def find_deletion_step(g: Graph, h: Graph, b: int) -> Optional[DeletionStep]:
    """First deletion step under the deterministic order policy, or None."""
    return _pick_step(_Peeler(g, h, b), None)


def is_stable(g: Graph, h: Graph, b: int) -> bool:
    return find_deletion_step(g, h, b) is None


def compute_core(g: Graph, h: Graph, b: int, order_policy: str = "deterministic",
                 seed: int = 0) -> DeletionTrace:
    """Run the deletion algorithm to its fixpoint and return the trace.

    order_policy is "deterministic" (bad vertices by index, then bad edges
    lexicographically, then bad sets in size-then-lex order, then small
    components by smallest vertex) or "seeded-random".
    """
    if order_policy not in ("deterministic", "seeded-random"):
        raise CoreError(f"unknown order policy {order_policy!r}")
    rng = np.random.default_rng(seed) if order_policy == "seeded-random" else None
    p = _Peeler(g, h, b)
    trace = DeletionTrace(n=g.n)
    while True:
        step = _pick_step(p, rng)
        if step is None:
            break
        trace.steps.append(step)
        if step.kind == "bad_vertex":
            trace.bad_vertices.append(step.vertices[0])
            p.delete_vertices(step.vertices)
        elif step.kind == "bad_edge":
            trace.bad_edges.append(step.edge)
            p.delete_edge(step.edge)
        elif step.kind == "bad_set":
            trace.bad_sets.append(frozenset(step.vertices))
            p.delete_vertices(step.vertices)
        else:
            trace.small_components.append(frozenset(step.vertices))
            p.delete_vertices(step.vertices)
    trace.core_vertices = frozenset(p.alive_v)
    trace.core_edges = frozenset(p.alive_edges)
    return trace
