"""Runnable strategy agents for the vertex games, plus box games.

Every named strategy below is an agent usable with engine.play_match and
engine.exhaustive_strategy_check: it exposes start(spec, board) and
next_move(request) -> tuple of vertices. Spoiler pairing strategies, the
Waiter strategy for DD_t, Maker's double-diamond strategies, the core
extension strategy, Avoider's pair strategy, Client's triple-diamond
strategy, builder strategies for trees and forests, the five-phase Maker
strategy, and the uniform box games all live here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import catalog
from .catalog import CatalogError
from .engine import (BoardTooLarge, GameSpec, MoveRequest, Outcome,
                     exhaustive_strategy_check, solve_from, solve_hypergraph,
                     targets_for)
from .graph import Graph, disjoint_union
from .subgraph import (contains_copy, copy_vertex_sets, find_embedding_of,
                       iter_embeddings, max_disjoint_copies)


class StrategyError(ValueError):
    pass


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        b = mask & -mask
        out.append(b.bit_length() - 1)
        mask ^= b
    return out


# -- pairings ------------------------------------------------------------------


def validate_pairing(pairing: Sequence[Sequence[int]], b: int) -> list[tuple[int, ...]]:
    """Pairwise-disjoint vertex sets of size 2..b+1."""
    seen = set()
    out = []
    for block in pairing:
        block = tuple(sorted(block))
        if not (2 <= len(block) <= b + 1):
            raise StrategyError(f"pairing block {block} has size outside 2..{b + 1}")
        if len(set(block)) != len(block) or seen & set(block):
            raise StrategyError("pairing blocks overlap")
        seen.update(block)
        out.append(block)
    return out


def is_blocking_pairing(g: Graph, h: Graph, pairing, b: int) -> bool:
    """True iff every H-copy's vertex set fully contains some pairing block.

    Then the spoiler's pairing strategy denies the builder every copy.
    """
    blocks = validate_pairing(pairing, b)
    block_masks = [sum(1 << v for v in blk) for blk in blocks]
    for vset in copy_vertex_sets(g, h):
        m = sum(1 << v for v in vset)
        if not any(bm & m == bm for bm in block_masks):
            return False
    return True


class BreakerPairingStrategy:
    """Claim all free elements of the pairing block the builder just entered."""

    stateless = True

    def __init__(self, pairing: Sequence[Sequence[int]], b: int = 1):
        self.blocks = validate_pairing(pairing, b)
        self.where = {}
        for i, blk in enumerate(self.blocks):
            for v in blk:
                self.where[v] = i

    def start(self, spec, board):
        pass

    def next_move(self, req: MoveRequest) -> tuple:
        free = req.free_mask
        picks: list[int] = []
        if req.last_opp_move:
            pending = []
            for v in req.last_opp_move:
                i = self.where.get(v)
                if i is None:
                    continue
                pending.extend(w for w in self.blocks[i] if free >> w & 1)
            for w in pending:
                if len(picks) < req.move_size and w not in picks:
                    picks.append(w)
        for w in _bits(free):
            if len(picks) >= req.move_size:
                break
            if w not in picks:
                picks.append(w)
        return tuple(picks[: req.move_size])


class WaiterPairingStrategy:
    """Offer each pairing block whole; offer leftovers arbitrarily.

    Blocks are offered atomically, so a block is pending exactly while all
    its elements are still free; no other bookkeeping is needed.
    """

    stateless = True

    def __init__(self, pairing: Sequence[Sequence[int]], b: int = 1):
        self.blocks = validate_pairing(pairing, b)

    def start(self, spec, board):
        pass

    def next_move(self, req: MoveRequest) -> tuple:
        free = req.free_mask
        sizes = req.offer_sizes or (req.move_size,)
        for blk in self.blocks:
            if not all(free >> v & 1 for v in blk):
                continue
            if len(blk) in sizes:
                return blk
            # pad with free junk to a legal size (wc offers are a+b wide)
            fits = [s for s in sizes if s >= len(blk)]
            if not fits:
                continue
            need = min(fits)
            junk = [v for v in _bits(free) if self._outside_blocks(v)]
            if len(blk) + len(junk) >= need:
                return tuple(list(blk) + junk[: need - len(blk)])
        # leftovers: smallest legal offer of free vertices, junk first
        size = min(sizes)
        pool = sorted(_bits(free), key=lambda v: (not self._outside_blocks(v), v))
        return tuple(pool[:size])

    def _outside_blocks(self, v: int) -> bool:
        return all(v not in blk for blk in self.blocks)


def spoiler_pairing_strategy(pairing, kind: str, b: int = 1):
    """Breaker variant ('mb') or Waiter variant ('cw'/'wc') of the pairing strategy."""
    if kind == "mb":
        return BreakerPairingStrategy(pairing, b)
    if kind in ("cw", "wc"):
        return WaiterPairingStrategy(pairing, b)
    raise StrategyError(f"no pairing spoiler for kind {kind!r}")


# -- Waiter's DD_t strategy -----------------------------------------------------


class WaiterDDtStrategy:
    """First offer {x,y}; then run the pairing matching Client's choice."""

    stateless = True

    def __init__(self, t: int):
        if t < 2:
            raise StrategyError(f"DD_t needs t >= 2, got {t}")
        self.t = t
        self.first_pair, self.pairings = catalog.ddt_waiter_pairings(t)
        self.inners = {v: WaiterPairingStrategy(pairs)
                       for v, pairs in self.pairings.items()}

    def start(self, spec, board):
        if board != catalog.ddt_graph(self.t):
            raise StrategyError(f"board is not the catalog DD_{self.t}")

    def next_move(self, req: MoveRequest) -> tuple:
        x, y = self.first_pair
        free = req.free_mask
        if free >> x & 1 and free >> y & 1:
            return self.first_pair
        picked = x if req.opp_mask >> x & 1 else y
        return self.inners[picked].next_move(req)


def waiter_ddt_strategy(t: int) -> WaiterDDtStrategy:
    return WaiterDDtStrategy(t)


# -- Maker's double-diamond strategies -------------------------------------------


class MakerDDStrategy:
    """Claim the center, then a y_i, then a z_j; as second player use two
    disjoint DD-copies and pair their centers and natural pairs."""

    stateless = True

    def __init__(self, role: str, dd_locations: Optional[Sequence[Sequence[int]]] = None):
        if role not in ("first", "second"):
            raise StrategyError("role must be 'first' or 'second'")
        self.role = role
        self.locations = dd_locations

    def start(self, spec, board: Graph):
        dd = catalog.dd_graph()
        if self.role == "first":
            emb = tuple(self.locations[0]) if self.locations \
                else find_embedding_of(board, dd)
            if emb is None:
                raise StrategyError("board contains no double diamond")
            self.center = emb[0]
            # diamonds as (y, (z, z')) in board labels
            self.diamonds = [(emb[1], (emb[2], emb[3])), (emb[4], (emb[5], emb[6]))]
        else:
            if self.locations:
                e1, e2 = tuple(self.locations[0]), tuple(self.locations[1])
            else:
                embs = self._two_disjoint(board, dd)
                if embs is None:
                    raise StrategyError("board contains no two vertex-disjoint DD-copies")
                e1, e2 = embs
            self.pairs = [(e1[0], e2[0])]
            for e in (e1, e2):
                self.pairs += [(e[1], e[4]), (e[2], e[3]), (e[5], e[6])]
            self.pair_of = {}
            for i, pr in enumerate(self.pairs):
                for v in pr:
                    self.pair_of[v] = i

    @staticmethod
    def _two_disjoint(board: Graph, dd: Graph):
        first = find_embedding_of(board, dd)
        if first is None:
            return None
        forbid = sum(1 << v for v in first)
        for image in iter_embeddings(board, dd, forbidden_mask=forbid):
            return first, image
        # retry over alternative first embeddings
        for e1 in iter_embeddings(board, dd):
            forbid = sum(1 << v for v in e1)
            for e2 in iter_embeddings(board, dd, forbidden_mask=forbid):
                return e1, e2
        return None

    def next_move(self, req: MoveRequest) -> tuple:
        free = req.free_mask
        mine = req.my_mask
        if self.role == "first":
            if not (mine >> self.center & 1):
                if not (free >> self.center & 1):
                    raise StrategyError("center already taken; the strategy moves first")
                return (self.center,)
            owned = next(((y, zs) for y, zs in self.diamonds if mine >> y & 1), None)
            if owned is None:
                # claim the y of a diamond the opponent has not touched
                for y, zs in self.diamonds:
                    if not any(req.opp_mask >> v & 1 for v in (y, *zs)):
                        return (y,)
                for y, zs in self.diamonds:
                    if free >> y & 1 and any(free >> z & 1 for z in zs):
                        return (y,)
                raise StrategyError("no usable diamond left")
            y, zs = owned
            if not any(mine >> z & 1 for z in zs):
                for z in zs:
                    if free >> z & 1:
                        return (z,)
                raise StrategyError("both z-vertices of the chosen diamond are gone")
            return (min(_bits(free)),)
        # second player: pairing response on the two copies
        if req.last_opp_move:
            for v in req.last_opp_move:
                i = self.pair_of.get(v)
                if i is None:
                    continue
                for w in self.pairs[i]:
                    if free >> w & 1:
                        return (w,)
        # otherwise take a free element of a pair I do not own yet
        for pr in self.pairs:
            if any(req.my_mask >> v & 1 for v in pr):
                continue
            for w in pr:
                if free >> w & 1:
                    return (w,)
        return (min(_bits(free)),)


def maker_dd_strategy(role: str, dd_locations=None) -> MakerDDStrategy:
    return MakerDDStrategy(role, dd_locations)


# -- spoiler core extension -------------------------------------------------------


class BreakerCoreExtension:
    """Extend a Breaker strategy on the stable core to the whole board.

    Answers a move into a recorded bad set U_i by claiming all of U_i's free
    vertices, a move into a small component W_j by claiming b free vertices
    of W_j, a move into the core by the inner strategy, anything else
    arbitrarily.
    """

    def __init__(self, trace, inner):
        self.trace = trace
        self.inner = inner
        self.stateless = bool(getattr(inner, "stateless", False))

    def start(self, spec, board):
        if spec.a != 1:
            raise StrategyError("the core extension assumes builder bias 1")
        self.core = self.trace.core_vertices
        self.u_of = {}
        for u in self.trace.bad_sets:
            for v in u:
                self.u_of[v] = u
        self.w_of = {}
        for w in self.trace.small_components:
            for v in w:
                self.w_of[v] = w
        if hasattr(self.inner, "start"):
            self.inner.start(spec, board)

    def next_move(self, req: MoveRequest) -> tuple:
        free = req.free_mask
        picks: list[int] = []
        v = req.last_opp_move[0] if req.last_opp_move else None
        if v is not None:
            if v in self.core:
                inner_move = tuple(self.inner.next_move(req))
                picks = [w for w in inner_move if free >> w & 1][: req.move_size]
            elif v in self.u_of:
                picks = [w for w in sorted(self.u_of[v]) if free >> w & 1][: req.move_size]
            elif v in self.w_of:
                picks = [w for w in sorted(self.w_of[v]) if free >> w & 1][: req.move_size]
        junk_first = sorted(_bits(free), key=lambda w: (w in self.core, w))
        for w in junk_first:
            if len(picks) >= req.move_size:
                break
            if w not in picks:
                picks.append(w)
        return tuple(picks[: req.move_size])


class WaiterCoreExtension:
    """Waiter analog: core offers first (inner strategy), then each bad set in
    one offer, then small components in chunks of b+1, then the rest.

    Blocks are offered atomically and in a fixed order, so the pending block
    is simply the first one whose elements are all still free.
    """

    def __init__(self, trace, inner):
        self.trace = trace
        self.inner = inner
        self.stateless = bool(getattr(inner, "stateless", False))

    def start(self, spec, board):
        if spec.a != 1:
            raise StrategyError("the core extension assumes builder bias 1")
        self.b = spec.b
        self.core = self.trace.core_vertices
        self.phase_sets: list[tuple[int, ...]] = []
        for u in self.trace.bad_sets:
            self.phase_sets.append(tuple(sorted(u)))
        for w in self.trace.small_components:
            block = sorted(w)
            for i in range(0, len(block), self.b + 1):
                self.phase_sets.append(tuple(block[i:i + self.b + 1]))
        if hasattr(self.inner, "start"):
            self.inner.start(spec, board)

    def next_move(self, req: MoveRequest) -> tuple:
        free = req.free_mask
        sizes = req.offer_sizes or (req.move_size,)
        if any(free >> v & 1 for v in self.core):
            return tuple(self.inner.next_move(req))
        for blk in self.phase_sets:
            live = [v for v in blk if free >> v & 1]
            if not live:
                continue
            if len(live) in sizes:
                return tuple(live)
            fits = [s for s in sizes if s <= len(live)]
            if fits:
                return tuple(live[: max(fits)])
        size = min(sizes)
        return tuple(sorted(_bits(free))[:size])


def spoiler_core_extension(g: Graph, h: Graph, b: int, inner, kind: str = "mb",
                           trace=None):
    """Breaker ('mb') or Waiter ('cw') extension of `inner` from the core to g."""
    from .core_reduction import compute_core
    if trace is None:
        trace = compute_core(g, h, b)
    if kind == "mb":
        return BreakerCoreExtension(trace, inner)
    if kind == "cw":
        return WaiterCoreExtension(trace, inner)
    raise StrategyError(f"no core extension for kind {kind!r}")


# -- Avoider's pair strategy -------------------------------------------------------


class AvoiderPairStrategy:
    """Never complete a pair: claim pool vertices or the mate of an
    opponent-claimed pair vertex; play box-avoider on intact pairs otherwise.

    With the singleton element d present, the precondition is that this
    player makes the last move when d is excluded (pool parity), so d is
    never forced on him.
    """

    stateless = True

    def __init__(self, pairs: Sequence[Sequence[int]], pool: Sequence[int] = (),
                 singleton: Optional[int] = None):
        self.pairs = [tuple(sorted(p)) for p in pairs]
        if any(len(p) != 2 for p in self.pairs):
            raise StrategyError("pairs must have size 2")
        self.pool = tuple(sorted(pool))
        self.singleton = singleton

    def start(self, spec, board):
        pass

    def next_move(self, req: MoveRequest) -> tuple:
        free = req.free_mask
        picks: list[int] = []
        for _ in range(req.move_size):
            v = self._one(req, free, picks)
            picks.append(v)
            free &= ~(1 << v)
        return tuple(picks)

    def _one(self, req: MoveRequest, free: int, taken: list[int]) -> int:
        mine = req.my_mask | sum(1 << v for v in taken)
        # pool vertices are always safe
        for v in self.pool:
            if free >> v & 1:
                return v
        # safe pair vertices: the other element is the opponent's
        for a, b in self.pairs:
            if free >> a & 1 and req.opp_mask >> b & 1:
                return a
            if free >> b & 1 and req.opp_mask >> a & 1:
                return b
        # intact pairs only: box-avoider move (one element of the first)
        for a, b in self.pairs:
            if free >> a & 1 and free >> b & 1 and not (mine >> a & 1 or mine >> b & 1):
                return a
        # forced: any free vertex, avoiding the singleton while possible
        for v in _bits(free):
            if v != self.singleton:
                return v
        if free:
            return _bits(free)[0]
        raise StrategyError("no free vertex to claim")


def avoider_pair_strategy(pairs, free_pool=(), singleton=None) -> AvoiderPairStrategy:
    return AvoiderPairStrategy(pairs, free_pool, singleton)


def enforcer_dd_strategy(board: Graph) -> AvoiderPairStrategy:
    """Enforcer in the strict (1:1) triangle game, given a DD-copy.

    Enforcer plays the auxiliary Avoider game: avoid the DD center and avoid
    completing any natural pair, so the real Avoider ends up with the center
    and a vertex from each pair.
    """
    emb = find_embedding_of(board, catalog.dd_graph())
    if emb is None:
        raise StrategyError("board contains no double diamond")
    pairs = [(emb[1], emb[4]), (emb[2], emb[3]), (emb[5], emb[6])]
    inside = {v for p in pairs for v in p} | {emb[0]}
    pool = [v for v in range(board.n) if v not in inside]
    return AvoiderPairStrategy(pairs, pool, singleton=emb[0])


# -- Client's triple-diamond strategy ----------------------------------------------


class ClientTripleDiamondStrategy:
    """Threat-driven Client play on a board containing a triple diamond.


    A threat is a set of not-yet-offered vertices that, together with
    Client's claims, completes a triangle; a forced pair is a 2-threat, which
    Waiter can only neutralize by offering both elements together. Claiming a
    threat vertex overrides every other rule.
    """

    stateless = True

    def __init__(self):
        pass

    def start(self, spec, board: Graph):
        emb = find_embedding_of(board, catalog.triple_diamond_graph())
        if emb is None:
            raise StrategyError("board contains no triple diamond")
        self.board = board
        lab = catalog.TRIPLE_DD_LABELS
        self.map = {name: emb[idx] for name, idx in lab.items()}
        order = ["x1", "x2", "y1", "y2", "w1", "w2", "z1", "z2", "z3", "z4"]
        self.priority = {self.map[name]: i for i, name in enumerate(order)}
        self.triangles = self._triangles(board)

    @staticmethod
    def _triangles(g: Graph) -> list[tuple[int, int, int]]:
        out = []
        for u, v in g.sorted_edges():
            common = g.adj_mask[u] & g.adj_mask[v]
            for w in _bits(common):
                if w > v:
                    out.append((u, v, w))
        return out

    def next_move(self, req: MoveRequest) -> tuple:
        # every offered vertex is claimed by the end of its round, so the
        # ever-offered set is exactly mine | waiter | current offer
        offer = tuple(req.offer or ())
        mine = req.my_mask
        waiter = req.opp_mask
        best = max(offer, key=lambda v: self._pick_score(v, offer, mine, waiter))
        return (best,)

    def _pick_score(self, v: int, offer, mine: int, waiter: int) -> tuple:
        """Rank a candidate pick by the threat structure it leaves behind.

        A completed triangle wins now; a singleton threat wins as soon as its
        vertex is offered; two threats sharing a vertex cannot both be
        offered as whole pairs, so they win as well (the winning-diamond
        pattern). Everything else falls back to counting threats and the
        structural x > y > w > z priority.
        """
        mine2 = mine | (1 << v)
        waiter2 = waiter | sum(1 << u for u in offer if u != v)
        won = 0
        for tri in self.triangles:
            if all(mine2 >> u & 1 for u in tri):
                won = 1
                break
        th = self._threats(mine2, waiter2, ())
        singles = sum(1 for t in th if len(t) == 1)
        seen: set[int] = set()
        overlap = 0
        for t in th:
            if seen & t:
                overlap = 1
            seen |= t
        return (won, singles, overlap, len(th), -self.priority.get(v, 99))

    def _threats(self, mine: int, waiter: int, offer) -> set[frozenset]:
        out: set[frozenset] = set()
        blocked = waiter
        offered = mine | waiter | sum(1 << v for v in offer)
        unoffered = ~offered
        for tri in self.triangles:
            tmask = sum(1 << v for v in tri)
            if tmask & blocked:
                continue
            need = [v for v in tri if not (mine >> v & 1)]
            if not need:
                continue
            if len(need) <= 2 and all(unoffered >> v & 1 or v in offer for v in need):
                out.add(frozenset(need))
        return out


def client_triple_diamond_strategy() -> ClientTripleDiamondStrategy:
    return ClientTripleDiamondStrategy()


# -- builder strategies for trees and forests ---------------------------------------


class MakerTreeStrategy:
    """Root-down claiming on a d-ary host: claim the root, then keep giving
    every claimed internal vertex Delta free children."""

    stateless = True

    def __init__(self, host: Graph, root: int, delta: int, levels: int):
        self.host = host
        self.root = root
        self.delta = delta
        self.levels = levels
        # BFS structure of the host tree
        self.children: dict[int, list[int]] = {v: [] for v in range(host.n)}
        self.level = {root: 0}
        order = [root]
        seen = {root}
        for v in order:
            for w in host.adj[v]:
                if w not in seen:
                    seen.add(w)
                    self.level[w] = self.level[v] + 1
                    self.children[v].append(w)
                    order.append(w)
        self.bfs = order

    def start(self, spec, board):
        if board.n < self.host.n:
            raise StrategyError("board smaller than the host tree")

    def next_move(self, req: MoveRequest) -> tuple:
        free = req.free_mask
        mine = req.my_mask
        if not (mine >> self.root & 1):
            if free >> self.root & 1:
                return (self.root,)
            raise StrategyError("root is gone; the strategy must move first")
        for v in self.bfs:
            if not (mine >> v & 1) or self.level[v] >= self.levels - 1:
                continue
            owned = sum(1 for w in self.children[v] if mine >> w & 1)
            if owned >= self.delta:
                continue
            for w in self.children[v]:
                if free >> w & 1:
                    return (w,)
        return (min(_bits(free)),)


def maker_tree_strategy(h: Graph, b: int) -> tuple[Graph, MakerTreeStrategy]:
    """Paper-sized host (d = 2b*Delta^h, h = v(H) levels) and its strategy."""
    if not h.is_tree():
        raise StrategyError("H must be a tree")
    delta = max(1, h.max_degree())
    levels = h.n
    d = 2 * b * delta ** levels
    host = catalog.dary_tree(d, levels)
    return host, MakerTreeStrategy(host, 0, delta, levels)


def maker_tree_reduced_host(h: Graph, b: int, max_d: int = 64,
                            exhaustive_budget: int = 2_000_000
                            ) -> tuple[Graph, MakerTreeStrategy, bool]:
    """Smallest d-ary host on which the root-down strategy checks out.

    Returns (host, strategy, exhaustive) where exhaustive=False means the
    host was too big for a full opponent walk and a sampled adversarial
    check was used instead.
    """
    if not h.is_tree():
        raise StrategyError("H must be a tree")
    delta = max(1, h.max_degree())
    levels = next(L for L in range(1, h.n + 1)
                  if contains_copy(catalog.dary_tree(delta, L), h))
    spec = GameSpec("mb", 1, b, h, "maker")
    for d in range(delta, max_d + 1):
        host = catalog.dary_tree(d, levels)
        strat = MakerTreeStrategy(host, 0, delta, levels)
        try:
            ok = exhaustive_strategy_check(spec, host, strat, "maker",
                                           node_budget=exhaustive_budget)
            if ok:
                return host, MakerTreeStrategy(host, 0, delta, levels), True
        except BoardTooLarge:
            if sampled_strategy_check(spec, host, strat, "maker", trials=300):
                return host, MakerTreeStrategy(host, 0, delta, levels), False
    raise StrategyError(f"no d-ary host up to d={max_d} passed the check")


@dataclass
class ForestStrategyPlan:
    """Hosts and replication counts for the sequential forest strategies."""

    trees: list[Graph]
    hosts: list[Graph]
    counts: list[int]
    side: str  # maker | client

    def board(self) -> Graph:
        parts = []
        for host, cnt in zip(self.hosts, self.counts):
            parts.extend([host] * cnt)
        return disjoint_union(parts)

    def host_slices(self) -> list[tuple[int, int, list[int]]]:
        """(tree index, copy index, vertex list) in board order."""
        out = []
        offset = 0
        for i, (host, cnt) in enumerate(zip(self.hosts, self.counts)):
            for j in range(cnt):
                out.append((i, j, list(range(offset, offset + host.n))))
                offset += host.n
        return out


def forest_plan(trees: Sequence[Graph], hosts: Sequence[Graph], b: int,
                side: str = "maker") -> ForestStrategyPlan:
    """Replication counts from the proofs: Maker uses 2bkv copies of each
    host, Client uses n_i = ((bv)^2 + 1)^(i-1) copies of the i-th host."""
    trees = list(trees)
    hosts = list(hosts)
    if len(trees) != len(hosts):
        raise StrategyError("one host per tree required")
    v = max(h.n for h in hosts)
    k = len(trees)
    if side == "maker":
        counts = [2 * b * k * v] * k
    elif side == "client":
        counts = [((b * v) ** 2 + 1) ** i for i in range(k)]
    else:
        raise StrategyError("side must be maker or client")
    return ForestStrategyPlan(trees, hosts, counts, side)


class MakerForestSequential:
    """Play each tree game on a fully free host copy, in sequence."""

    def __init__(self, plan: ForestStrategyPlan):
        self.plan = plan

    def start(self, spec, board: Graph):
        self.board = board
        self.slices = self.plan.host_slices()
        if board.n < sum(len(s[2]) for s in self.slices):
            raise StrategyError("board lacks the replicated hosts")
        self.tree_idx = 0
        self.active: Optional[tuple[int, list[int]]] = None  # (tree idx, vertices)
        self.spec = spec

    def next_move(self, req: MoveRequest) -> tuple:
        free = req.free_mask
        while self.tree_idx < len(self.plan.trees):
            tree = self.plan.trees[self.tree_idx]
            needed = self.plan.hosts[self.tree_idx]
            if self.active is None:
                # any fully free copy of the right host shape will do
                for i, _, verts in self.slices:
                    if self.plan.hosts[i] == needed and all(free >> v & 1 for v in verts):
                        self.active = (self.tree_idx, verts)
                        break
                if self.active is None:
                    raise StrategyError("hosts exhausted mid-game")
            _, verts = self.active
            sub, back = self._subgame(req, verts)
            if contains_copy(self._claimed_graph(req, verts), tree):
                self.tree_idx += 1
                self.active = None
                continue
            tgt = targets_for(sub, tree)
            val, move = solve_from(GameSpec("mb", req.spec.a, req.spec.b, tree, "maker"),
                                   sub.n, tgt,
                                   self._mask_in(req.my_mask, verts),
                                   self._mask_in(req.opp_mask, verts), "maker")
            if val and move:
                return tuple(back[v] for v in _bits(move))[: req.move_size]
            self.active = None  # this copy is lost; find a fresh one
        return (min(_bits(free)),)

    def _subgame(self, req, verts):
        sub = self.board.induced(verts)
        back = {i: v for i, v in enumerate(sorted(verts))}
        return sub, back

    def _mask_in(self, mask: int, verts) -> int:
        out = 0
        for i, v in enumerate(sorted(verts)):
            if mask >> v & 1:
                out |= 1 << i
        return out

    def _claimed_graph(self, req, verts) -> Graph:
        mine = [v for v in verts if req.my_mask >> v & 1]
        return self.board.induced(mine)


class ClientForestSequential:
    """Lexicographic-priority Client response with tree deletion bookkeeping."""

    def __init__(self, plan: ForestStrategyPlan):
        self.plan = plan

    def start(self, spec, board: Graph):
        self.board = board
        self.slices = self.plan.host_slices()
        self.alive = {(i, j): verts for i, j, verts in self.slices}
        self.spec = spec

    def next_move(self, req: MoveRequest) -> tuple:
        offer = tuple(req.offer or ())
        hit = None
        for (i, j), verts in sorted(self.alive.items()):
            if any(v in verts for v in offer):
                hit = (i, j)
                break
        if hit is None:
            return (offer[0],)
        verts = self.alive[hit]
        tree = self.plan.trees[hit[0]]
        pick = self._tree_pick(req, verts, tree, offer)
        # delete every other alive tree the offer touches
        for key, vs in list(self.alive.items()):
            if key != hit and any(v in vs for v in offer):
                del self.alive[key]
        return (pick,)

    def _tree_pick(self, req, verts, tree: Graph, offer) -> int:
        sub = self.board.induced(verts)
        order = sorted(verts)
        idx = {v: i for i, v in enumerate(order)}
        cmask = sum(1 << idx[v] for v in verts if req.my_mask >> v & 1)
        wmask = sum(1 << idx[v] for v in verts if req.opp_mask >> v & 1)
        local_offer = [v for v in offer if v in idx]
        tgt = targets_for(sub, tree)
        spec = GameSpec("cw", req.spec.a, req.spec.b, tree)
        from .engine import HypergraphSolver
        solver = HypergraphSolver(spec, sub.n, tgt)
        best = local_offer[0]
        for v in local_offer:
            pm = 1 << idx[v]
            om = sum(1 << idx[u] for u in local_offer)
            if solver.builder_wins(cmask | pm, wmask | (om & ~pm)):
                best = v
                break
        return best


def builder_forest_sequential_strategy(plan: ForestStrategyPlan, side: str):
    if side == "maker":
        return MakerForestSequential(plan)
    if side == "client":
        return ClientForestSequential(plan)
    raise StrategyError("side must be maker or client")


# -- five-phase Maker strategy --------------------------------------------------


class PhaseStarvation(RuntimeError):
    """No free vertex available for the current phase."""


class MakerFivePhaseStrategy:
    """Triangle first, then four expansion phases through neighborhoods.

    Phase budgets: ceil(50/(n^2 p^3)), ceil(5/(n p^2)), ceil(1/(2p)), n/20.
    There is no win guarantee at desk scale; starvation raises rather than
    hides.
    """

    def __init__(self, n: int, p: float, role: str = "first"):
        self.n = n
        self.p = p
        self.role = role
        self.budgets = [
            math.ceil(50.0 / (n * n * p ** 3)),
            math.ceil(5.0 / (n * p * p)),
            math.ceil(1.0 / (2 * p)),
            max(1, n // 20),
        ]

    def start(self, spec, board: Graph):
        self.board = board
        self.inner = MakerDDStrategy(self.role)
        self.inner.start(spec, board)
        self.phase = 1
        self.done_in_phase = 0
        self.sets: dict[int, list[int]] = {1: [], 2: [], 3: [], 4: [], 5: []}
        self.v1: Optional[int] = None

    def phase_sets(self) -> dict[int, list[int]]:
        return self.sets

    def next_move(self, req: MoveRequest) -> tuple:
        free = req.free_mask
        if self.phase == 1:
            move = self.inner.next_move(req)
            self.sets[1].extend(move)
            if self.v1 is None:
                self.v1 = move[0]
            self.done_in_phase += 1
            if self.done_in_phase == 3:
                self.phase, self.done_in_phase = 2, 0
            return move
        if self.phase >= 6:
            if not free:
                raise PhaseStarvation("board exhausted")
            return (min(_bits(free)),)
        prev = [self.v1] if self.phase == 2 else self.sets[self.phase - 1]
        pool = 0
        for v in prev:
            pool |= self.board.adj_mask[v]
        pool &= free
        if not pool:
            raise PhaseStarvation(f"phase {self.phase} has no free neighbor")
        v = _bits(pool)[0]
        self.sets[self.phase].append(v)
        self.done_in_phase += 1
        if self.done_in_phase >= self.budgets[self.phase - 2]:
            self.phase += 1
            self.done_in_phase = 0
        return (v,)


def maker_five_phase_strategy(n: int, p: float, role: str = "first") -> MakerFivePhaseStrategy:
    return MakerFivePhaseStrategy(n, p, role)


def neighborhood_expansion_ok(g: Graph, p: float, samples: int, seed: int = 0) -> bool:
    """Sampled check of |N(U)| >= |U| n p / 4 for random U with |U| <= 1/(2p)."""
    rng = np.random.default_rng(seed)
    cap = max(1, int(1.0 / (2 * p)))
    for _ in range(samples):
        size = int(rng.integers(1, cap + 1))
        u = rng.choice(g.n, size=min(size, g.n), replace=False)
        umask = sum(1 << int(v) for v in u)
        nb = 0
        for v in u:
            nb |= g.adj_mask[int(v)]
        nb &= ~umask
        if nb.bit_count() < len(u) * g.n * p / 4:
            return False
    return True


# -- box games -------------------------------------------------------------------


BOX_KINDS = ("wc_box", "ae_box_strict", "ae_box_monotone")


@dataclass(frozen=True)
class BoxGameSpec:
    """Uniform box game: n boxes of size k, biases (a:b)."""

    n: int
    k: int
    a: int = 1
    b: int = 1
    kind: str = "wc_box"
    first: Optional[str] = None  # for the AE variants

    def __post_init__(self):
        if self.kind not in BOX_KINDS:
            raise StrategyError(f"unknown box game kind {self.kind!r}")
        if self.n < 1 or self.k < 1:
            raise StrategyError("need n, k >= 1")

    def elements(self) -> int:
        return self.n * self.k

    def boxes(self) -> list[int]:
        full = (1 << self.k) - 1
        return [full << (i * self.k) for i in range(self.n)]

    def game_spec(self) -> GameSpec:
        if self.kind == "wc_box":
            return GameSpec("wc", self.a, self.b)
        kind = "ae_strict" if self.kind == "ae_box_strict" else "ae_monotone"
        return GameSpec(kind, self.a, self.b, first=self.first)


def box_solve(spec: BoxGameSpec) -> str:
    """Exact winner: BoxWaiter/BoxClient or BoxAvoider/BoxEnforcer."""
    if spec.elements() > 18:
        raise BoardTooLarge(f"box game with {spec.elements()} elements > 18")
    out = solve_hypergraph(spec.game_spec(), spec.elements(), spec.boxes())
    return {"waiter": "BoxWaiter", "client": "BoxClient",
            "avoider": "BoxAvoider", "enforcer": "BoxEnforcer"}[out.winner]


class BoxWaiterStrategy:
    """The recursive BoxWaiter strategy: round-robin fresh boxes, recurse on
    the boxes Client entered; needs n >= (a+b)^k boxes.

    State is recomputed from the masks each round: a tracked box is *virgin*
    while Waiter owns none of it (the all-in-one-round offers keep virgin
    boxes exactly the ones never declined), and its level is the number of
    elements Client holds in it. Each offer takes one free element from each
    of a+b virgin boxes at the lowest level; with (a+b)^k tracked boxes the
    level populations stay divisible by a+b, and the level-(k-1) batches
    force Client to fill a box.
    """

    stateless = True

    def __init__(self, spec: BoxGameSpec, box_masks: Optional[Sequence[int]] = None):
        if spec.kind != "wc_box":
            raise StrategyError("BoxWaiter plays the wc box game")
        self.box_spec = spec
        need = (spec.a + spec.b) ** spec.k
        if spec.n < need:
            raise StrategyError(f"BoxWaiter needs at least {need} boxes, got {spec.n}")
        self.need = need
        self.custom_masks = list(box_masks) if box_masks is not None else None

    def start(self, spec, board):
        masks = self.custom_masks if self.custom_masks is not None \
            else self.box_spec.boxes()
        self.box_masks = masks[: self.need]  # tracked boxes only

    def next_move(self, req: MoveRequest) -> tuple:
        bs = self.box_spec
        free = req.free_mask
        client = req.opp_mask
        waiter = req.my_mask
        virgin = []
        for i, bm in enumerate(self.box_masks):
            if bm & waiter:
                continue
            level = (bm & client).bit_count()
            if level >= bs.k:
                continue
            virgin.append((level, i))
        virgin.sort()
        batch = virgin[: bs.a + bs.b]
        if len(batch) == bs.a + bs.b:
            offer = []
            for _, i in batch:
                cand = self.box_masks[i] & free
                if not cand:
                    break
                offer.append(_bits(cand)[0])
            if len(offer) == bs.a + bs.b:
                return tuple(sorted(offer))
        # plan finished (or board degenerate): offer arbitrary free vertices
        size = max(req.offer_sizes or (req.move_size,))
        pool = _bits(free)
        return tuple(pool[:min(size, len(pool))])


def boxwaiter_strategy(a: int, b: int, k: int, n: Optional[int] = None) -> BoxWaiterStrategy:
    n = n if n is not None else (a + b) ** k
    return BoxWaiterStrategy(BoxGameSpec(n=n, k=k, a=a, b=b, kind="wc_box"))


@dataclass(frozen=True)
class AEBoxPrediction:
    """Winner predicate for the strict AE box game by the gcd criterion."""

    a: int
    b: int
    k: int
    enforcer_eventually: bool

    def describe(self) -> str:
        if self.enforcer_eventually:
            return "BoxEnforcer for every sufficiently large n (either mover)"
        return "BoxAvoider for every n (either mover)"


def aebox_predicted_winner(a: int, b: int, k: int) -> AEBoxPrediction:
    """BoxEnforcer-for-large-n iff gcd(a+b, l) <= a for every 2 <= l <= k."""
    if a < 1 or b < 1 or k < 1:
        raise StrategyError("need positive a, b, k")
    ok = all(math.gcd(a + b, L) <= a for L in range(2, k + 1))
    return AEBoxPrediction(a, b, k, enforcer_eventually=ok)


class EngineOptimalStrategy:
    """Play engine-exact moves (mb / ae claim games on hypergraph targets)."""

    stateless = True

    def __init__(self, side: str, targets: Optional[Sequence[int]] = None):
        self.side = side
        self.targets = targets

    def start(self, spec, board):
        self.spec = spec
        self.board = board
        if self.targets is None:
            self.targets = targets_for(board, spec.target)

    def next_move(self, req: MoveRequest) -> tuple:
        amask = req.my_mask if req.side == req.spec.watched else req.opp_mask
        bmask = req.opp_mask if req.side == req.spec.watched else req.my_mask
        _, move = solve_from(req.spec, req.board.n, self.targets, amask, bmask,
                             req.side)
        if move is None:
            return tuple(_bits(req.free_mask))[: req.move_size]
        return tuple(_bits(move))


class EnforcerMonotoneBoxStrategy:
    """Monotone Enforcer: grab everything outside the disjoint H-copies in the
    first move, then play the AE box game engine-optimally."""

    def __init__(self, g: Graph, h: Graph, a: int, b: int):
        copies, exact = max_disjoint_copies(g, h, g.n // max(1, h.n))
        if not copies:
            raise StrategyError("no H-copies to enforce")
        self.copies = copies
        self.h = h

    stateless = True

    def start(self, spec, board: Graph):
        self.board = board
        self.targets = [sum(1 << v for v in c) for c in self.copies]
        inside = 0
        for t in self.targets:
            inside |= t
        self.outside = ((1 << board.n) - 1) & ~inside

    def next_move(self, req: MoveRequest) -> tuple:
        free = req.free_mask
        if req.my_mask == 0:
            grab = self.outside & free
            need = min(req.move_size, free.bit_count())
            picks = _bits(grab)
            if len(picks) < need:
                picks += [v for v in _bits(free & ~grab)][: need - len(picks)]
            if picks:
                return tuple(picks)
        amask = req.opp_mask  # avoider is the watched side
        bmask = req.my_mask
        _, move = solve_from(req.spec, self.board.n, self.targets, amask, bmask,
                             "enforcer")
        if move:
            return tuple(_bits(move))
        return tuple(_bits(free))[: req.move_size]


def enforcer_monotone_strategy(g: Graph, h: Graph, a: int, b: int) -> EnforcerMonotoneBoxStrategy:
    return EnforcerMonotoneBoxStrategy(g, h, a, b)


class WaiterBoxReduction:
    """Waiter forces the H-game by playing BoxWaiter over disjoint H-copies."""

    def __init__(self, g: Graph, h: Graph, a: int, b: int):
        need = (a + b) ** h.n
        copies, exact = max_disjoint_copies(g, h, need)
        if len(copies) < need:
            raise StrategyError(
                f"waiter reduction needs {need} disjoint H-copies, found {len(copies)}")
        self.copies = copies[:need]
        self.k = h.n
        self.a, self.b = a, b

    def start(self, spec, board: Graph):
        masks = [sum(1 << v for v in c) for c in self.copies]
        self.inner = BoxWaiterStrategy(
            BoxGameSpec(n=len(self.copies), k=self.k, a=self.a, b=self.b,
                        kind="wc_box"),
            box_masks=masks)
        self.inner.start(spec, board)

    def next_move(self, req: MoveRequest) -> tuple:
        return self.inner.next_move(req)


def waiter_box_strategy(g: Graph, h: Graph, a: int, b: int) -> WaiterBoxReduction:
    return WaiterBoxReduction(g, h, a, b)


# -- sampled adversarial checking (for boards beyond exhaustive walks) -----------


class RandomStrategy:
    """Uniformly random legal moves (seeded via the match RNG)."""

    stateless = True

    def start(self, spec, board):
        pass

    def next_move(self, req: MoveRequest) -> tuple:
        rng = req.rng or np.random.default_rng(0)
        if req.offer is not None:
            picks = rng.choice(len(req.offer), size=req.move_size, replace=False)
            return tuple(req.offer[i] for i in picks)
        pool = req.free_vertices()
        if req.offer_sizes:
            size = int(rng.choice([s for s in req.offer_sizes if s <= len(pool)]))
            idx = rng.choice(len(pool), size=size, replace=False)
            return tuple(pool[i] for i in idx)
        size = min(req.move_size, len(pool))
        idx = rng.choice(len(pool), size=size, replace=False)
        return tuple(pool[i] for i in idx)


class GreedyKillerBreaker:
    """Adversarial Breaker for tree hosts: kill free children of the
    builder's most recently claimed vertices."""

    stateless = True

    def start(self, spec, board: Graph):
        self.board = board

    def next_move(self, req: MoveRequest) -> tuple:
        free = req.free_mask
        frontier = 0
        for v in _bits(req.opp_mask):
            frontier |= self.board.adj_mask[v]
        frontier &= free
        picks = _bits(frontier)[: req.move_size]
        for v in _bits(free):
            if len(picks) >= req.move_size:
                break
            if v not in picks:
                picks.append(v)
        return tuple(picks[: req.move_size])


def sampled_strategy_check(spec: GameSpec, g: Graph, strategy, side: str,
                           trials: int = 200, seed: int = 0) -> bool:
    """Strategy wins every sampled match (random + greedy adversaries).

    Not a proof; used only where the exhaustive walk is infeasible.
    """
    from .engine import play_match
    import copy as _copy
    targets = targets_for(g, spec.target) if spec.target is not None else None
    adversaries = [RandomStrategy() for _ in range(trials)] + [GreedyKillerBreaker()]
    for i, adv in enumerate(adversaries):
        s = _copy.deepcopy(strategy)
        if side == spec.watched:
            result = play_match(spec, g, s, adv, seed=seed + i, targets=targets)
        else:
            result = play_match(spec, g, adv, s, seed=seed + i, targets=targets)
        if result.winner != side:
            return False
    return True
