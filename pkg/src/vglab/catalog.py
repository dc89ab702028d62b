"""Catalog of the named graphs used throughout the package.

Labeled constructions follow the source figures exactly:

* DD (double diamond): center ``x`` then ``y1,z1,z2,y2,z3,z4``; the two
  diamonds are {x,y1,z1,z2} and {x,y2,z3,z4} with z1z2 and z3z4 missing.
* TTT (triple triangle): v1..v5 with edges v1v2, v1v3, v2v3, v2v4, v3v4,
  v3v5, v4v5.
* DD_t: a K3-chain of triangles {a_i,b_i,c_i} (c_i = a_{i+1}) plus the two
  end triangles x~{a1,c1} and y~{c_{t-1},c_t}; DD_2 is isomorphic to DD.
* triple diamond: three diamonds D_L={x1,y1,z1,z2}, D_M={x1,x2,w1,w2},
  D_R={x2,y2,z3,z4}, consecutive ones sharing a max-degree vertex.
* feasible_a / feasible_b / feasible_c: the three 4-cycle-stable components
  that survive the C4 analysis, with the pairing labels x_i, y_i, z_i.

Each construction also records its natural pairing where one exists.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .graph import Graph, disjoint_union


class CatalogError(ValueError):
    """Invalid catalog family or parameters."""


@dataclass(frozen=True)
class CatalogId:
    """A (family name, integer parameters) tag for a catalog graph."""

    name: str
    params: tuple[int, ...] = field(default_factory=tuple)

    def __str__(self) -> str:
        if not self.params:
            return self.name
        return f"{self.name}({','.join(map(str, self.params))})"


# family name -> (min #params, max #params)
_FAMILIES = {
    "K": (1, 1),          # complete graph K_k
    "C": (1, 1),          # cycle C_k
    "P": (1, 1),          # path on l vertices
    "S": (1, 1),          # star with d edges
    "tree": (2, 2),       # complete d-ary tree with h levels: (d, h)
    "diamond": (0, 0),    # K4 minus an edge
    "DD": (0, 0),
    "TTT": (0, 0),
    "DDt": (1, 1),        # two diamonds joined by a K3-chain of length t-2
    "K3cycle": (1, 1),    # K3-cycle of length t >= 3
    "tripledd": (0, 0),   # triple diamond
    "feasible_a": (0, 0),
    "feasible_b": (0, 0),
    "feasible_c": (0, 0),
}


def parse_catalog_id(text: str) -> CatalogId:
    """Parse e.g. 'K3', 'C4', 'DD', 'DDt(3)', 'tree(2,3)', 'feasible_b'."""
    text = text.strip()
    if "(" in text:
        name, rest = text.split("(", 1)
        if not rest.endswith(")"):
            raise CatalogError(f"unbalanced parens in {text!r}")
        params = tuple(int(x) for x in rest[:-1].split(",") if x.strip())
        return CatalogId(name, params)
    # compact forms K3, C4, P5, S2
    if len(text) > 1 and text[0] in "KCPS" and text[1:].isdigit():
        return CatalogId(text[0], (int(text[1:]),))
    return CatalogId(text, ())


def complete_graph(k: int) -> Graph:
    return Graph(k, [(u, v) for u in range(k) for v in range(u + 1, k)])


def cycle_graph(k: int) -> Graph:
    if k < 3:
        raise CatalogError(f"cycle needs k >= 3, got {k}")
    return Graph(k, [(i, (i + 1) % k) for i in range(k)])


def path_graph(length: int) -> Graph:
    """Path on `length` vertices."""
    if length < 1:
        raise CatalogError(f"path needs >= 1 vertex, got {length}")
    return Graph(length, [(i, i + 1) for i in range(length - 1)])


def star_graph(d: int) -> Graph:
    """Star S_d with d edges (d+1 vertices, center 0)."""
    if d < 1:
        raise CatalogError(f"star needs d >= 1 edges, got {d}")
    return Graph(d + 1, [(0, i) for i in range(1, d + 1)])


def dary_tree(d: int, h: int) -> Graph:
    """Complete d-ary tree with h levels (root alone is h=1), BFS labels."""
    if d < 1 or h < 1:
        raise CatalogError(f"d-ary tree needs d,h >= 1, got ({d},{h})")
    edges = []
    level_start, level_size = 0, 1
    nxt = 1
    for _ in range(h - 1):
        for v in range(level_start, level_start + level_size):
            for _ in range(d):
                edges.append((v, nxt))
                nxt += 1
        level_start += level_size
        level_size *= d
    return Graph(nxt, edges)


def diamond_graph() -> Graph:
    """K4 minus one edge, vertices x=0, y=1, z=2, w=3, missing zw."""
    return Graph(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)])


# Fixed labelings ------------------------------------------------------------

# DD: x=0, y1=1, z1=2, z2=3, y2=4, z3=5, z4=6
DD_CENTER = 0
DD_PAIRS = ((1, 4), (2, 3), (5, 6))  # {y1,y2}, {z1,z2}, {z3,z4}


def dd_graph() -> Graph:
    return Graph(7, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3),
                     (0, 4), (0, 5), (0, 6), (4, 5), (4, 6)])


# TTT: v1..v5 -> 0..4
TTT_PAIRS = ((1, 2), (3, 4))  # {v2,v3}, {v4,v5}


def ttt_graph() -> Graph:
    return Graph(5, [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3), (2, 4), (3, 4)])


def ddt_graph(t: int) -> Graph:
    """DD_t: chain triangles {a_i,b_i,c_i}, c_i = a_{i+1}; x~{a1,c1}, y~{c_{t-1},c_t}.

    Labels: a_i = 2(i-1), b_i = 2i-1, c_i = 2i, x = 2t+1, y = 2t+2.
    """
    if t < 2:
        raise CatalogError(f"DD_t needs t >= 2, got {t}")
    edges = []
    for i in range(1, t + 1):
        a, b, c = 2 * (i - 1), 2 * i - 1, 2 * i
        edges += [(a, b), (a, c), (b, c)]
    x, y = 2 * t + 1, 2 * t + 2
    edges += [(0, x), (2, x), (2 * t - 2, y), (2 * t, y)]
    return Graph(2 * t + 3, edges)


def ddt_waiter_pairings(t: int) -> tuple[tuple[int, int], dict]:
    """The first offer {x,y} and the two pairing lists keyed by Client's pick.

    Lambda_x = {a1,c1} + {b_i,c_i} for i >= 2; Lambda_y = {a_t,c_t} + {a_i,b_i}
    for i < t.
    """
    x, y = 2 * t + 1, 2 * t + 2
    lam_x = [(0, 2)] + [(2 * i - 1, 2 * i) for i in range(2, t + 1)]
    lam_y = [(2 * t - 2, 2 * t)] + [(2 * (i - 1), 2 * i - 1) for i in range(1, t)]
    return (x, y), {x: tuple(lam_x), y: tuple(lam_y)}


def k3_cycle_graph(t: int) -> Graph:
    """K3-cycle of length t: triangles {a_i, b_i, a_{i+1 mod t}}; a_i = i, b_i = t+i."""
    if t < 3:
        raise CatalogError(f"K3-cycle needs t >= 3, got {t}")
    edges = []
    for i in range(t):
        a, b, a2 = i, t + i, (i + 1) % t
        edges += [(a, b), (b, a2), (a, a2)]
    return Graph(2 * t, edges)


def k3_cycle_pairs(t: int) -> tuple[tuple[int, int], ...]:
    """Natural pairs {a_i, b_i} of the K3-cycle (blocking for t >= 4)."""
    return tuple((i, t + i) for i in range(t))


# triple diamond: x1=0, x2=1, y1=2, y2=3, z1=4, z2=5, z3=6, z4=7, w1=8, w2=9
TRIPLE_DD_LABELS = {"x1": 0, "x2": 1, "y1": 2, "y2": 3, "z1": 4, "z2": 5,
                    "z3": 6, "z4": 7, "w1": 8, "w2": 9}


def triple_diamond_graph() -> Graph:
    return Graph(10, [(0, 2), (2, 4), (2, 5), (0, 4), (0, 5),
                      (0, 1), (0, 8), (0, 9), (1, 8), (1, 9),
                      (1, 3), (1, 6), (1, 7), (3, 6), (3, 7)])


# feasible components for the C4 game; x1=0, x2=1, y1=2, y2=3, (z1=4, z2=5)
FEASIBLE_A_PAIRS = ((0, 1), (2, 3), (4, 5))
FEASIBLE_B_PAIRS = ((0, 1), (2, 3))
FEASIBLE_C_PAIRS = ((0, 1), (2, 3), (4, 5))


def feasible_a_graph() -> Graph:
    # x1=0, x2=1, y1=2, y2=3, z1=4, z2=5, unlabeled 6,7,8
    return Graph(9, [(0, 6), (0, 7), (1, 7), (1, 6), (0, 8), (1, 8),
                     (1, 2), (1, 5), (3, 4), (1, 4), (2, 3), (3, 5)])


def feasible_b_graph() -> Graph:
    # hub x1=0 on a 6-cycle x2=1, y1=2, y2=3, unlabeled 4,5,6
    return Graph(7, [(0, 4), (0, 1), (0, 3), (4, 5), (5, 1), (1, 6),
                     (6, 3), (3, 2), (2, 4)])


def feasible_c_graph() -> Graph:
    # 3x3 grid: x1=0, x2=1 the middle column's top/center, y/z the sides
    return Graph(9, [(6, 0), (6, 2), (0, 7), (0, 1), (7, 4), (2, 1),
                     (2, 3), (1, 4), (1, 8), (4, 5), (3, 8), (8, 5)])


def make_catalog_graph(cid: CatalogId | str) -> Graph:
    """Build the canonical labeled construction for a catalog id."""
    if isinstance(cid, str):
        cid = parse_catalog_id(cid)
    if cid.name not in _FAMILIES:
        raise CatalogError(f"unknown catalog family {cid.name!r}")
    lo, hi = _FAMILIES[cid.name]
    if not (lo <= len(cid.params) <= hi):
        raise CatalogError(f"{cid.name} takes {lo}..{hi} params, got {cid.params}")
    p = cid.params
    if cid.name == "K":
        if p[0] < 1:
            raise CatalogError("K_k needs k >= 1")
        return complete_graph(p[0])
    if cid.name == "C":
        return cycle_graph(p[0])
    if cid.name == "P":
        return path_graph(p[0])
    if cid.name == "S":
        return star_graph(p[0])
    if cid.name == "tree":
        return dary_tree(*p)
    if cid.name == "diamond":
        return diamond_graph()
    if cid.name == "DD":
        return dd_graph()
    if cid.name == "TTT":
        return ttt_graph()
    if cid.name == "DDt":
        return ddt_graph(p[0])
    if cid.name == "K3cycle":
        return k3_cycle_graph(p[0])
    if cid.name == "tripledd":
        return triple_diamond_graph()
    if cid.name == "feasible_a":
        return feasible_a_graph()
    if cid.name == "feasible_b":
        return feasible_b_graph()
    if cid.name == "feasible_c":
        return feasible_c_graph()
    raise CatalogError(f"unhandled family {cid.name!r}")


# H-chains and H-cycles -------------------------------------------------------


def h_chain(h: Graph, t: int, joints: Optional[Sequence[tuple[int, int]]] = None) -> Graph:
    """Chain of t H-copies, consecutive copies sharing exactly one vertex.

    joints[i] = (exit vertex of copy i+1, entry vertex of copy i+2), both in
    H's own labeling. Default places the exit at distance ~v/2 from the entry
    (irrelevant for cliques, and the opposite vertex for even cycles).
    """
    if t < 1:
        raise CatalogError(f"H-chain needs t >= 1, got {t}")
    if not h.is_connected() or h.n < 2:
        raise CatalogError("H must be connected with >= 2 vertices")
    v = h.n
    if joints is None:
        joints = [(v // 2, 0) for _ in range(t - 1)]
    joints = list(joints)
    if len(joints) != t - 1:
        raise CatalogError(f"need {t - 1} joints, got {len(joints)}")
    for i, (exit_v, next_entry) in enumerate(joints):
        if not (0 <= exit_v < v and 0 <= next_entry < v):
            raise CatalogError(f"joint {i} out of range")
        # middle copies must not reuse the entry vertex as their exit, or
        # copies i and i+2 would intersect
        if i > 0 and exit_v == joints[i - 1][1]:
            raise CatalogError("inconsistent joints: exit equals entry of the same copy")
    # first copy keeps H's labels; each later copy glues its entry onto the
    # previous copy's exit
    edges = list(h.sorted_edges())
    n = v
    prev_map = list(range(v))
    for exit_v, next_entry in joints:
        glue = prev_map[exit_v]
        cur_map = [0] * v
        for w in range(v):
            if w == next_entry:
                cur_map[w] = glue
            else:
                cur_map[w] = n
                n += 1
        edges.extend((cur_map[a], cur_map[b]) for a, b in h.sorted_edges())
        prev_map = cur_map
    return Graph(n, edges)


def h_cycle(h: Graph, t: int, joints: Optional[Sequence[tuple[int, int]]] = None) -> Graph:
    """Cyclic arrangement of t >= 3 H-copies, consecutive ones sharing one vertex.

    joints[i] = (exit of copy i+1, entry of copy i+2 mod t), t entries total.
    """
    if t < 3:
        raise CatalogError(f"H-cycle needs t >= 3, got {t}")
    if not h.is_connected() or h.n < 2:
        raise CatalogError("H must be connected with >= 2 vertices")
    v = h.n
    if joints is None:
        joints = [(v // 2, 0) for _ in range(t)]
    joints = list(joints)
    if len(joints) != t:
        raise CatalogError(f"need {t} joints, got {len(joints)}")
    for exit_v, next_entry in joints:
        if not (0 <= exit_v < v and 0 <= next_entry < v):
            raise CatalogError("joint out of range")
    # build copies, merging exit_i with entry_{i+1}; copy 0 keeps H's labels
    maps: list[list[Optional[int]]] = [[None] * v for _ in range(t)]
    maps[0] = list(range(v))
    n = v
    for i in range(1, t):
        exit_prev, entry_cur = joints[i - 1]
        glue = maps[i - 1][exit_prev]
        for w in range(v):
            if w == entry_cur:
                maps[i][w] = glue
            else:
                maps[i][w] = n
                n += 1
    # close the ring: exit of copy t-1 merges with entry of copy 0
    exit_last, entry_first = joints[t - 1]
    drop = maps[t - 1][exit_last]
    keep = maps[0][entry_first]
    if drop == keep:
        raise CatalogError("inconsistent joints: ring closure degenerate")
    relab = {}
    nxt = 0
    for i in range(n):
        if i == drop:
            continue
        relab[i] = nxt
        nxt += 1
    relab[drop] = relab[keep]
    edges = []
    for i in range(t):
        edges.extend((relab[maps[i][a]], relab[maps[i][b]]) for a, b in h.sorted_edges())
    g = Graph(nxt, edges)
    # validate the pairwise intersection pattern of the copies
    vsets = [frozenset(relab[x] for x in maps[i]) for i in range(t)]
    for i in range(t):
        for j in range(i + 1, t):
            want = 1 if (j - i == 1 or (i == 0 and j == t - 1)) else 0
            if len(vsets[i] & vsets[j]) != want:
                raise CatalogError("inconsistent joints: copies overlap incorrectly")
    if g.m != t * h.m:
        raise CatalogError("inconsistent joints: copies share edges")
    return g


def two_disjoint_dds() -> Graph:
    return disjoint_union([dd_graph(), dd_graph()])
