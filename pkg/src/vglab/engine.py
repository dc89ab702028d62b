"""Rules and exact solving of vertex claiming games.

Game kinds: Maker-Breaker ("mb"), strict and monotone Avoider-Enforcer
("ae_strict", "ae_monotone"), Waiter-Client ("wc"), Client-Waiter ("cw").
Boards are vertex sets; the side whose induced claimed set decides the game
("watched" side) is Maker / Avoider / Client. Targets are the vertex sets of
H-copies, so the builder of the game wins exactly when the watched set covers
a target. Internally every game is a hypergraph game over target masks, which
is also how box games are solved.

Solving is memoized backward induction over (claimed masks, side to move),
with target-union move restriction for Maker-Breaker (sound: junk vertices
are interchangeable and tempo-free in MB) and a box-symmetry canonical memo
key whenever the targets are pairwise disjoint.
"""

from __future__ import annotations

import copy as _copy
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from .graph import Graph
from .subgraph import copy_vertex_sets

KINDS = ("mb", "ae_strict", "ae_monotone", "wc", "cw")

# (watched side, other side) per kind; watched = the side whose set is judged
_SIDES = {
    "mb": ("maker", "breaker"),
    "ae_strict": ("avoider", "enforcer"),
    "ae_monotone": ("avoider", "enforcer"),
    "wc": ("client", "waiter"),
    "cw": ("client", "waiter"),
}
# the builder wants a target inside the watched set
_BUILDER = {"mb": "maker", "ae_strict": "enforcer", "ae_monotone": "enforcer",
            "wc": "waiter", "cw": "client"}


class BoardTooLarge(ValueError):
    pass


class UnsupportedGameKind(ValueError):
    pass


class IllegalMove(ValueError):
    pass


@dataclass(frozen=True)
class GameSpec:
    """Which game: kind, biases (a = Maker/Avoider/Client), target H, first mover."""

    kind: str
    a: int = 1
    b: int = 1
    target: Optional[Graph] = None
    first: Optional[str] = None  # mb/ae only; defaults to the watched side

    def __post_init__(self):
        if self.kind not in KINDS:
            raise UnsupportedGameKind(f"unknown kind {self.kind!r}")
        if self.a < 1 or self.b < 1:
            raise ValueError("biases must be positive")
        if self.first is not None and self.first not in _SIDES[self.kind]:
            raise ValueError(f"first mover {self.first!r} not a side of {self.kind}")

    @property
    def watched(self) -> str:
        return _SIDES[self.kind][0]

    @property
    def other(self) -> str:
        return _SIDES[self.kind][1]

    @property
    def builder(self) -> str:
        return _BUILDER[self.kind]

    @property
    def spoiler(self) -> str:
        w, o = _SIDES[self.kind]
        return o if self.builder == w else w

    def first_mover(self) -> str:
        if self.kind in ("wc", "cw"):
            return self.other  # Waiter always initiates rounds
        return self.first if self.first is not None else self.watched

    def last_mover(self, n: int) -> str:
        """Who claims the last free vertex (mb/ae alternation, by parity).

        With biases (1:1) the first mover makes the last move iff n is odd.
        General biases: simulate the claim counts.
        """
        if self.kind in ("wc", "cw"):
            raise UnsupportedGameKind("last mover is an mb/ae notion")
        first = self.first_mover()
        second = self.other if first == self.watched else self.watched
        bias = {self.watched: self.a, self.other: self.b}
        left, turn, last = n, first, first
        while left > 0:
            take = min(bias[turn], left)
            left -= take
            last = turn
            turn = second if turn == first else first
        return last


@dataclass
class Outcome:
    winner: str
    principal_variation: Optional[list] = None
    nodes_expanded: int = 0
    method: str = "solve"

    def to_json_dict(self) -> dict:
        out = {"winner": self.winner, "nodes_expanded": self.nodes_expanded,
               "method": self.method}
        if self.principal_variation is not None:
            out["principal_variation"] = [list(m) for m in self.principal_variation]
        return out


def targets_for(g: Graph, h: Graph) -> list[int]:
    """Vertex-set masks of the distinct H-copies in g (the winning sets)."""
    return [sum(1 << v for v in s) for s in copy_vertex_sets(g, h)]


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        b = mask & -mask
        out.append(b.bit_length() - 1)
        mask ^= b
    return out


def _check_size(spec: GameSpec, n: int, targets: Sequence[int], disjoint: bool) -> None:
    # pairwise-disjoint targets admit a box-symmetry canonical memo key, so
    # those boards may be larger
    if spec.kind == "mb":
        union = 0
        for t in targets:
            union |= t
        if n > 18 and union.bit_count() > 20:
            raise BoardTooLarge(f"mb board n={n} with live union {union.bit_count()} > 20")
    elif spec.kind == "ae_strict":
        cap = 24 if disjoint else 18
        if n > cap:
            raise BoardTooLarge(f"ae_strict board n={n} > {cap}")
    elif spec.kind == "ae_monotone":
        cap = 18 if disjoint else 12
        if n > cap:
            raise BoardTooLarge(f"ae_monotone board n={n} > {cap}")
    else:
        cap = 24 if disjoint else (14 if spec.a + spec.b <= 2 else 12)
        if n > cap:
            raise BoardTooLarge(f"{spec.kind} board n={n} > {cap}")


class HypergraphSolver:
    """Zermelo backward induction for one (spec, board, targets) instance."""

    def __init__(self, spec: GameSpec, n: int, targets: Sequence[int]):
        self.spec = spec
        self.n = n
        self.full = (1 << n) - 1
        # dedupe and drop dominated (superset) targets
        uniq = sorted(set(targets), key=lambda t: (t.bit_count(), t))
        keep: list[int] = []
        for t in uniq:
            if not any(k & t == k for k in keep):
                keep.append(t)
        self.targets = keep
        self.memo: dict = {}
        self.nodes = 0
        self.disjoint = self._pairwise_disjoint(keep)
        self.boxes = keep if self.disjoint else None
        _check_size(spec, n, targets, self.disjoint)

    @staticmethod
    def _pairwise_disjoint(targets: Sequence[int]) -> bool:
        seen = 0
        for t in targets:
            if seen & t:
                return False
            seen |= t
        return len(targets) > 0

    # -- state keys -----------------------------------------------------------

    def _key(self, amask: int, bmask: int, tm: int):
        if self.boxes is None:
            return (amask, bmask, tm)
        per = sorted((t.bit_count(), (t & amask).bit_count(), (t & bmask).bit_count())
                     for t in self.boxes)
        outside = self._outside_mask()
        a_out = (amask & outside).bit_count()
        b_out = (bmask & outside).bit_count()
        return (tuple(per), a_out, b_out, tm)

    def _outside_mask(self) -> int:
        u = 0
        for t in self.targets:
            u |= t
        return self.full & ~u

    # -- terminal tests ---------------------------------------------------------

    def _builder_done(self, amask: int) -> bool:
        return any(t & ~amask == 0 for t in self.targets)

    def _all_dead(self, bmask: int) -> bool:
        return all(t & bmask for t in self.targets)

    # -- move generation --------------------------------------------------------

    def _claim_moves(self, free: int, bias: int, live: Optional[int]) -> Iterable[int]:
        """Masks claimable by a strict mover (exactly min(bias, |free|))."""
        fcount = free.bit_count()
        size = min(bias, fcount)
        if size == 0:
            yield 0
            return
        if live is None:
            pool = _bits(free)
            for comb in combinations(pool, size):
                yield sum(1 << v for v in comb)
            return
        pool = _bits(free & live)
        junk = _bits(free & ~live)
        if not pool:
            yield sum(1 << v for v in junk[:size])
            return
        k = min(size, len(pool))
        pad = sum(1 << v for v in junk[: size - k])
        for comb in combinations(pool, k):
            yield sum(1 << v for v in comb) | pad

    def _monotone_moves(self, free: int, bias: int) -> Iterable[int]:
        pool = _bits(free)
        if len(pool) <= bias:
            yield free
            return
        for size in range(bias, len(pool) + 1):
            for comb in combinations(pool, size):
                yield sum(1 << v for v in comb)

    def _live_union(self, bmask: int) -> int:
        u = 0
        for t in self.targets:
            if not (t & bmask):
                u |= t
        return u

    def _order_claims(self, moves: Iterable[int], amask: int, bmask: int) -> list[int]:
        live = [t for t in self.targets if not (t & bmask)]

        def score(m: int) -> int:
            s = 0
            for t in live:
                if t & m:
                    s += 1
                    if (t & ~(amask | m)) == 0:
                        s += 100
            return -s

        return sorted(moves, key=score)

    # -- solving ----------------------------------------------------------------

    def builder_wins(self, amask: int = 0, bmask: int = 0,
                     to_move: Optional[str] = None) -> bool:
        spec = self.spec
        if spec.kind in ("wc", "cw"):
            return self._round_value(amask, bmask)
        tm = 0 if (to_move or spec.first_mover()) == spec.watched else 1
        return self._turn_value(amask, bmask, tm)

    def _turn_value(self, amask: int, bmask: int, tm: int) -> bool:
        spec = self.spec
        builder_is_a = spec.builder == spec.watched
        if self._builder_done(amask):
            return True
        free = self.full & ~(amask | bmask)
        if self._all_dead(bmask) or free == 0:
            return False
        key = self._key(amask, bmask, tm)
        hit = self.memo.get(key)
        if hit is not None:
            return hit[0]
        self.nodes += 1
        mover_is_a = tm == 0
        mover_builder = mover_is_a == builder_is_a
        bias = spec.a if mover_is_a else spec.b
        if spec.kind == "mb":
            live = self._live_union(bmask)
            # maker can finish now if some live target needs <= bias free vertices
            if mover_is_a:
                for t in self.targets:
                    if not (t & bmask):
                        rem = t & ~amask
                        if rem.bit_count() <= bias:
                            self.memo[key] = (True, rem | self._pad(free & ~rem,
                                                                    bias - rem.bit_count()))
                            return True
            moves = self._claim_moves(free, bias, live)
        elif spec.kind == "ae_monotone":
            moves = self._monotone_moves(free, bias)
        else:
            moves = self._claim_moves(free, bias, None)
        moves = self._order_claims(moves, amask if mover_is_a else bmask, bmask)
        best_move = None
        result = not mover_builder  # worst case for the mover
        for m in moves:
            if mover_is_a:
                val = self._turn_value(amask | m, bmask, 1)
            else:
                val = self._turn_value(amask, bmask | m, 0)
            if val == mover_builder:
                best_move, result = m, val
                break
            if best_move is None:
                best_move = m
        self.memo[key] = (result, best_move)
        return result

    @staticmethod
    def _pad(free: int, k: int) -> int:
        out = 0
        while k > 0 and free:
            b = free & -free
            out |= b
            free ^= b
            k -= 1
        return out

    # Waiter-Client / Client-Waiter rounds -------------------------------------

    def _round_value(self, cmask: int, wmask: int) -> bool:
        spec = self.spec
        if self._builder_done(cmask):
            return True
        if self._all_dead(wmask):
            return False
        free = self.full & ~(cmask | wmask)
        if free == 0:
            return False
        key = self._key(cmask, wmask, 0)
        hit = self.memo.get(key)
        if hit is not None:
            return hit[0]
        self.nodes += 1
        a, b = spec.a, spec.b
        f = free.bit_count()
        waiter_builds = spec.kind == "wc"
        best_move = None
        if spec.kind == "wc":
            if f <= b:
                result = self._round_value(cmask, wmask | free)
                best_move = (free, 0)
            elif f <= a + b:
                # last round: client chooses f-b to claim, the rest go to waiter
                result = True
                for pick in combinations(_bits(free), f - b):
                    pmask = sum(1 << v for v in pick)
                    val = self._round_value(cmask | pmask, wmask | (free & ~pmask))
                    if best_move is None:
                        best_move = (free, pmask)
                    if not val:
                        result, best_move = False, (free, pmask)
                        break
            else:
                result = False
                for offer in self._offers(free, (a + b,), cmask, wmask):
                    val = self._client_reply(cmask, wmask, offer, a, waiter_builds)
                    if best_move is None:
                        best_move = (offer, None)
                    if val:
                        result, best_move = True, (offer, None)
                        break
        else:  # cw
            if f < a:
                result = self._round_value(cmask | free, wmask)
                best_move = (free, free)
            else:
                sizes = tuple(range(a, min(a + b, f) + 1))
                result = True
                for offer in self._offers(free, sizes, cmask, wmask):
                    val = self._client_reply(cmask, wmask, offer, a, waiter_builds)
                    if best_move is None:
                        best_move = (offer, None)
                    if not val:
                        result, best_move = False, (offer, None)
                        break
        self.memo[key] = (result, best_move)
        return result

    def _client_reply(self, cmask: int, wmask: int, offer: int, a: int,
                      waiter_builds: bool) -> bool:
        """Value after Client picks his share of `offer` (client optimizes)."""
        picks = list(combinations(_bits(offer), min(a, offer.bit_count())))
        client_wants = not waiter_builds
        result = not client_wants
        for pick in picks:
            pmask = sum(1 << v for v in pick)
            val = self._round_value(cmask | pmask, wmask | (offer & ~pmask))
            if val == client_wants:
                return val
            result = val
        return result

    def _offers(self, free: int, sizes: tuple[int, ...], cmask: int, wmask: int):
        pool = _bits(free)
        live = [t for t in self.targets if not (t & wmask)]

        def score(offer_mask: int) -> int:
            s = 0
            for t in live:
                inter = (t & offer_mask).bit_count()
                if inter >= 2:
                    s += 2
                elif inter == 1:
                    s += 1
            return -s

        offers = []
        for size in sizes:
            if size > len(pool):
                continue
            offers.extend(sum(1 << v for v in comb)
                          for comb in combinations(pool, size))
        offers.sort(key=score)
        return offers


def solve_hypergraph(spec: GameSpec, n: int, targets: Sequence[int]) -> Outcome:
    """Exact winner of the hypergraph game (used directly by box games)."""
    solver = HypergraphSolver(spec, n, targets)
    builder = solver.builder_wins()
    winner = spec.builder if builder else spec.spoiler
    return Outcome(winner=winner, nodes_expanded=solver.nodes,
                   principal_variation=_principal_variation(solver))


def solve_from(spec: GameSpec, n: int, targets: Sequence[int], amask: int,
               bmask: int, to_move: str) -> tuple[bool, Optional[int]]:
    """Value from a mid-game claim state, plus a best claim for `to_move`.

    mb/ae kinds only (round games have no single-mask move). The move is
    re-derived by one-ply evaluation so it is valid for the actual masks even
    when the memo uses the box-symmetry canonical key.
    """
    if spec.kind in ("wc", "cw"):
        raise UnsupportedGameKind("solve_from supports claim games only")
    solver = HypergraphSolver(spec, n, targets)
    val = solver.builder_wins(amask, bmask, to_move)
    free = solver.full & ~(amask | bmask)
    if free == 0 or solver._builder_done(amask) or solver._all_dead(bmask):
        return val, None
    mover_is_a = to_move == spec.watched
    bias = spec.a if mover_is_a else spec.b
    builder_is_a = spec.builder == spec.watched
    mover_builder = mover_is_a == builder_is_a
    if spec.kind == "ae_monotone":
        moves = solver._monotone_moves(free, bias)
    elif spec.kind == "mb":
        moves = solver._claim_moves(free, bias, solver._live_union(bmask))
    else:
        moves = solver._claim_moves(free, bias, None)
    other = spec.other if mover_is_a else spec.watched
    best = None
    for m in moves:
        if best is None:
            best = m
        child = solver.builder_wins(amask | m, bmask, other) if mover_is_a \
            else solver.builder_wins(amask, bmask | m, other)
        if child == mover_builder:
            return val, m
    return val, best


def _principal_variation(solver: HypergraphSolver, limit: int = 64) -> Optional[list]:
    # replay stored best moves; claims are vertex tuples, rounds (offer, pick)
    spec = solver.spec
    amask = bmask = 0
    pv: list = []
    if spec.kind in ("wc", "cw"):
        while len(pv) < limit:
            key = solver._key(amask, bmask, 0)
            hit = solver.memo.get(key)
            if hit is None or hit[1] is None:
                break
            offer, pick = hit[1]
            if pick is None:
                break
            pv.append(tuple(_bits(offer)))
            pv.append(tuple(_bits(pick)))
            amask |= pick
            bmask |= offer & ~pick
        return pv or None
    tm = 0 if spec.first_mover() == spec.watched else 1
    while len(pv) < limit:
        key = solver._key(amask, bmask, tm)
        hit = solver.memo.get(key)
        if hit is None or hit[1] is None:
            break
        move = hit[1]
        pv.append(tuple(_bits(move)))
        if tm == 0:
            amask |= move
        else:
            bmask |= move
        tm ^= 1
    return pv or None


def solve(spec: GameSpec, g: Graph) -> Outcome:
    """Exact winner of the vertex H-game on g under optimal play."""
    if spec.target is None:
        raise ValueError("spec.target (H) is required")
    if spec.kind in ("mb", "cw") and (not spec.target.is_connected() or spec.target.m < 1):
        raise ValueError("builder games need a connected H with >= 1 edge")
    targets = targets_for(g, spec.target)
    out = solve_hypergraph(spec, g.n, targets)
    return out


def solve_components(spec: GameSpec, g: Graph) -> Outcome:
    """Combine per-component outcomes (mb and cw only).

    mb: Maker moving first wins iff some component is a Maker-first win;
    Maker moving second wins iff some component is a Maker-second win or at
    least two components are Maker-first wins. cw: Client wins iff some
    component is a Client win. AE/WC kinds are rejected: move parity couples
    their components.
    """
    if spec.kind not in ("mb", "cw"):
        raise UnsupportedGameKind("solve_components supports mb and cw only")
    if spec.target is None or not spec.target.is_connected():
        raise ValueError("H must be connected")
    comps = [g.induced(c) for c in g.components()]
    if spec.kind == "cw":
        nodes = 0
        client = False
        for sub in comps:
            out = solve(spec, sub)
            nodes += out.nodes_expanded
            if out.winner == "client":
                client = True
                break
        return Outcome(winner="client" if client else "waiter",
                       nodes_expanded=nodes, method="components")
    # mb
    nodes = 0
    first_wins = 0
    second_win = False
    for sub in comps:
        out1 = solve(GameSpec("mb", spec.a, spec.b, spec.target, "maker"), sub)
        nodes += out1.nodes_expanded
        if out1.winner == "maker":
            first_wins += 1
            out2 = solve(GameSpec("mb", spec.a, spec.b, spec.target, "breaker"), sub)
            nodes += out2.nodes_expanded
            if out2.winner == "maker":
                second_win = True
    if spec.first_mover() == "maker":
        maker = first_wins >= 1
    else:
        maker = second_win or first_wins >= 2
    return Outcome(winner="maker" if maker else "breaker",
                   nodes_expanded=nodes, method="components")


# -- match running and strategy verification ----------------------------------


@dataclass
class MoveRequest:
    """What a strategy sees when asked to move."""

    spec: GameSpec
    board: Graph
    side: str
    my_mask: int
    opp_mask: int
    free_mask: int
    move_size: int
    offer: Optional[tuple[int, ...]] = None   # set when picking from an offer
    offer_sizes: Optional[tuple[int, ...]] = None  # legal sizes when offering
    last_opp_move: Optional[tuple[int, ...]] = None
    rng: Optional[np.random.Generator] = None

    def free_vertices(self) -> list[int]:
        return _bits(self.free_mask)


@dataclass
class MatchResult:
    winner: str
    transcript: list = field(default_factory=list)
    seed: Optional[int] = None
    illegal: Optional[str] = None  # side that played an illegal move, if any


class GameCursor:
    """Steps through one play of a game, enforcing the move rules."""

    def __init__(self, spec: GameSpec, g: Graph, targets: Optional[Sequence[int]] = None):
        self.spec = spec
        self.g = g
        self.n = g.n
        self.full = (1 << g.n) - 1
        self.targets = list(targets) if targets is not None \
            else targets_for(g, spec.target)
        self.amask = 0  # watched side
        self.bmask = 0
        self.tm = spec.first_mover()
        self.last_move: dict[str, Optional[tuple[int, ...]]] = {
            spec.watched: None, spec.other: None}

    # winner or None; the outcome is fixed early once every target is hit by
    # the non-watched side, even with free junk vertices left
    def winner(self) -> Optional[str]:
        spec = self.spec
        if any(t & ~self.amask == 0 for t in self.targets):
            return spec.builder
        free = self.full & ~(self.amask | self.bmask)
        if free == 0 or all(t & self.bmask for t in self.targets):
            return spec.spoiler
        return None

    def free(self) -> int:
        return self.full & ~(self.amask | self.bmask)

    # -- pending request generation (mb / ae) ----------------------------------

    def claim_request(self, rng=None) -> MoveRequest:
        spec = self.spec
        side = self.tm
        mine = self.amask if side == spec.watched else self.bmask
        opp = self.bmask if side == spec.watched else self.amask
        bias = spec.a if side == spec.watched else spec.b
        free = self.free()
        size = min(bias, free.bit_count())
        return MoveRequest(spec=spec, board=self.g, side=side, my_mask=mine,
                           opp_mask=opp, free_mask=free, move_size=size,
                           last_opp_move=self.last_move[
                               spec.other if side == spec.watched else spec.watched],
                           rng=rng)

    def legal_claims(self) -> list[tuple[int, ...]]:
        spec = self.spec
        free = self.free()
        pool = _bits(free)
        bias = spec.a if self.tm == spec.watched else spec.b
        if spec.kind == "ae_monotone":
            if len(pool) <= bias:
                return [tuple(pool)]
            out = []
            for size in range(bias, len(pool) + 1):
                out.extend(combinations(pool, size))
            return out
        size = min(bias, len(pool))
        return list(combinations(pool, size))

    def apply_claim(self, move: tuple[int, ...]) -> None:
        spec = self.spec
        mmask = sum(1 << v for v in move)
        free = self.free()
        if mmask & ~free or len(set(move)) != len(move):
            raise IllegalMove(f"{self.tm} claimed non-free vertices {move}")
        bias = spec.a if self.tm == spec.watched else spec.b
        if spec.kind == "ae_monotone":
            if len(move) < min(bias, free.bit_count()):
                raise IllegalMove(f"{self.tm} claimed fewer than bias in monotone game")
        else:
            if len(move) != min(bias, free.bit_count()):
                raise IllegalMove(f"{self.tm} must claim exactly min(bias, free)")
        if self.tm == spec.watched:
            self.amask |= mmask
        else:
            self.bmask |= mmask
        self.last_move[self.tm] = tuple(move)
        self.tm = spec.other if self.tm == spec.watched else spec.watched

    # -- rounds (wc / cw) --------------------------------------------------------

    def round_phase(self) -> tuple[str, dict]:
        """('waiter_offer', {...}) | ('client_pick', {...}) | ('forced', {...})."""
        spec = self.spec
        free = self.free()
        f = free.bit_count()
        a, b = spec.a, spec.b
        if spec.kind == "wc":
            if f <= b:
                return "forced", {"claim_by": "waiter", "mask": free}
            if f <= a + b:
                return "client_pick", {"offer": free, "pick_size": f - b}
            return "waiter_offer", {"sizes": (a + b,)}
        if f < a:
            return "forced", {"claim_by": "client", "mask": free}
        return "waiter_offer", {"sizes": tuple(range(a, min(a + b, f) + 1))}

    def offer_request(self, rng=None) -> MoveRequest:
        spec = self.spec
        phase, info = self.round_phase()
        assert phase == "waiter_offer"
        return MoveRequest(spec=spec, board=self.g, side="waiter",
                           my_mask=self.bmask, opp_mask=self.amask,
                           free_mask=self.free(), move_size=max(info["sizes"]),
                           offer_sizes=info["sizes"], rng=rng)

    def pick_request(self, offer: tuple[int, ...], pick_size: int, rng=None) -> MoveRequest:
        return MoveRequest(spec=self.spec, board=self.g, side="client",
                           my_mask=self.amask, opp_mask=self.bmask,
                           free_mask=self.free(), move_size=pick_size,
                           offer=tuple(offer), rng=rng)

    def apply_offer_and_pick(self, offer: tuple[int, ...], pick: tuple[int, ...]) -> None:
        spec = self.spec
        free = self.free()
        omask = sum(1 << v for v in offer)
        pmask = sum(1 << v for v in pick)
        phase, info = self.round_phase()
        if phase == "waiter_offer":
            if omask & ~free or len(offer) not in info["sizes"]:
                raise IllegalMove(f"waiter offered illegal set {offer}")
            pick_size = min(spec.a, len(offer)) if spec.kind == "cw" else spec.a
        elif phase == "client_pick":
            if omask != info["offer"]:
                raise IllegalMove("last-round offer must be the whole free set")
            pick_size = info["pick_size"]
        else:
            raise IllegalMove("no offer expected in a forced round")
        if pmask & ~omask or len(pick) != pick_size:
            raise IllegalMove(f"client pick {pick} illegal for offer {offer}")
        self.amask |= pmask
        self.bmask |= omask & ~pmask
        self.last_move["client"] = tuple(pick)
        self.last_move["waiter"] = tuple(offer)

    def apply_forced(self) -> None:
        phase, info = self.round_phase()
        assert phase == "forced"
        if info["claim_by"] == "waiter":
            self.bmask |= info["mask"]
        else:
            self.amask |= info["mask"]


def play_match(spec: GameSpec, g: Graph, strategy_a, strategy_b,
               seed: int = 0, targets: Optional[Sequence[int]] = None) -> MatchResult:
    """Run one match; strategy_a plays the watched side (Maker/Avoider/Client).

    For wc/cw, strategy_b is the Waiter (offerer) and strategy_a the Client.
    An illegal move is recorded and counts as a loss for the offender.
    """
    rng = np.random.default_rng(seed)
    cur = GameCursor(spec, g, targets)
    transcript: list = []
    strategies = {spec.watched: strategy_a, spec.other: strategy_b}
    for s in strategies.values():
        if hasattr(s, "start"):
            s.start(spec, g)
    offender = spec.watched
    while True:
        w = cur.winner()
        if w is not None:
            return MatchResult(winner=w, transcript=transcript, seed=seed)
        try:
            if spec.kind in ("wc", "cw"):
                phase, info = cur.round_phase()
                if phase == "forced":
                    cur.apply_forced()
                    transcript.append((info["claim_by"], "forced",
                                       tuple(_bits(info["mask"]))))
                    continue
                if phase == "client_pick":
                    offender = "client"
                    offer = tuple(_bits(info["offer"]))
                    pick = strategies["client"].next_move(
                        cur.pick_request(offer, info["pick_size"], rng))
                    cur.apply_offer_and_pick(offer, tuple(pick))
                    transcript.append(("waiter", "offer", offer))
                    transcript.append(("client", "pick", tuple(pick)))
                    continue
                offender = "waiter"
                offer = tuple(strategies["waiter"].next_move(cur.offer_request(rng)))
                omask = sum(1 << v for v in offer)
                if omask & ~cur.free() or len(offer) not in info["sizes"]:
                    raise IllegalMove(f"waiter offered illegal set {offer}")
                pick_size = min(spec.a, len(offer))
                offender = "client"
                pick = tuple(strategies["client"].next_move(
                    cur.pick_request(offer, pick_size, rng)))
                cur.apply_offer_and_pick(offer, pick)
                transcript.append(("waiter", "offer", offer))
                transcript.append(("client", "pick", pick))
            else:
                offender = cur.tm
                move = tuple(strategies[offender].next_move(cur.claim_request(rng)))
                cur.apply_claim(move)
                transcript.append((offender, "claim", move))
        except IllegalMove as exc:
            transcript.append((offender, "illegal", str(exc)))
            winner = spec.other if offender == spec.watched else spec.watched
            return MatchResult(winner=winner, transcript=transcript, seed=seed,
                               illegal=offender)


def exhaustive_strategy_check(spec: GameSpec, g: Graph, strategy, side: str,
                              node_budget: int = 20_000_000,
                              targets: Optional[Sequence[int]] = None) -> bool:
    """True iff `strategy`, playing `side`, wins against every opponent play.

    Full opponent-tree walk with the strategy fixing its own moves; raises
    BoardTooLarge if the walk would exceed node_budget nodes. Strategies that
    declare `stateless = True` (their next_move is a pure function of the
    request) are shared across branches and the walk is memoized on the
    position; stateful strategies are deep-copied at every branch point.
    """
    if targets is None:
        targets = targets_for(g, spec.target) if spec.target is not None else None
    counter = [0]
    stateless = bool(getattr(strategy, "stateless", False))
    memo: dict = {}

    def state_key(cur: GameCursor):
        return (cur.amask, cur.bmask, cur.tm,
                cur.last_move[spec.watched], cur.last_move[spec.other])

    def wins_from(cur: GameCursor, strat) -> bool:
        counter[0] += 1
        if counter[0] > node_budget:
            raise BoardTooLarge("exhaustive strategy check exceeded node budget")
        w = cur.winner()
        if w is not None:
            return w == side
        if stateless:
            key = state_key(cur)
            hit = memo.get(key)
            if hit is not None:
                return hit
        result = _expand(cur, strat)
        if stateless:
            memo[state_key(cur)] = result
        return result

    def _expand(cur: GameCursor, strat) -> bool:
        if spec.kind in ("wc", "cw"):
            phase, info = cur.round_phase()
            if phase == "forced":
                nxt = _clone_cursor(cur)
                nxt.apply_forced()
                return wins_from(nxt, strat)
            if phase == "client_pick":
                offer = tuple(_bits(info["offer"]))
                return _branch_pick(cur, strat, offer, info["pick_size"])
            if side == "waiter":
                offer = tuple(strat.next_move(cur.offer_request()))
                return _branch_pick(cur, strat, offer, min(spec.a, len(offer)))
            # opponent waiter branches over all offers
            pool = _bits(cur.free())
            for size in info["sizes"]:
                for offer in combinations(pool, size):
                    if not _branch_pick(cur, strat, offer, min(spec.a, len(offer))):
                        return False
            return True
        if cur.tm == side:
            move = tuple(strat.next_move(cur.claim_request()))
            nxt = _clone_cursor(cur)
            s2 = strat if stateless else _copy.deepcopy(strat)
            nxt.apply_claim(move)
            return wins_from(nxt, s2)
        for move in cur.legal_claims():
            nxt = _clone_cursor(cur)
            s2 = strat if stateless else _copy.deepcopy(strat)
            nxt.apply_claim(move)
            if not wins_from(nxt, s2):
                return False
        return True

    def _branch_pick(cur: GameCursor, strat, offer, pick_size: int) -> bool:
        if side == "client":
            s2 = strat if stateless else _copy.deepcopy(strat)
            pick = tuple(s2.next_move(cur.pick_request(offer, pick_size)))
            nxt = _clone_cursor(cur)
            nxt.apply_offer_and_pick(offer, pick)
            return wins_from(nxt, s2)
        for pick in combinations(offer, pick_size):
            nxt = _clone_cursor(cur)
            s2 = strat if stateless else _copy.deepcopy(strat)
            nxt.apply_offer_and_pick(offer, pick)
            if not wins_from(nxt, s2):
                return False
        return True

    def _clone_cursor(cur: GameCursor) -> GameCursor:
        nxt = GameCursor.__new__(GameCursor)
        nxt.spec = cur.spec
        nxt.g = cur.g
        nxt.n = cur.n
        nxt.full = cur.full
        nxt.targets = cur.targets
        nxt.amask = cur.amask
        nxt.bmask = cur.bmask
        nxt.tm = cur.tm
        nxt.last_move = dict(cur.last_move)
        return nxt

    cur = GameCursor(spec, g, targets)
    if hasattr(strategy, "start"):
        strategy.start(spec, g)
    return wins_from(cur, strategy)
