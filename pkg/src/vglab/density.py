"""Exact density computations and balancedness predicates.

All quantities are fractions.Fraction values; density comparisons are never
done in floating point. Subset enumeration is capped at 24 vertices, which is
the largest size the component analyses ever need; bigger inputs are rejected
rather than approximated.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .graph import Graph

SUBSET_ENUM_CAP = 24


class DensityError(ValueError):
    pass


def density(g: Graph) -> Fraction:
    """e(G)/v(G)."""
    if g.n < 1:
        raise DensityError("density undefined for the empty graph")
    return Fraction(g.m, g.n)


def _check_size(g: Graph) -> None:
    if g.n > SUBSET_ENUM_CAP:
        raise DensityError(
            f"subset enumeration capped at {SUBSET_ENUM_CAP} vertices, got {g.n}")


def _subset_edge_counts(g: Graph):
    """Yield (mask, #edges inside mask) for every nonempty mask, Gray-code order."""
    adj = g.adj_mask
    mask, edges = 0, 0
    gray_prev = 0
    for i in range(1, 1 << g.n):
        gray = i ^ (i >> 1)
        bit = gray ^ gray_prev
        v = bit.bit_length() - 1
        if gray & bit:
            edges += (adj[v] & mask).bit_count()
            mask |= bit
        else:
            mask &= ~bit
            edges -= (adj[v] & mask).bit_count()
        gray_prev = gray
        yield mask, edges


def _mask_vertices(mask: int) -> tuple[int, ...]:
    out = []
    while mask:
        b = mask & -mask
        out.append(b.bit_length() - 1)
        mask ^= b
    return tuple(out)


def max_density(g: Graph) -> tuple[Fraction, tuple[int, ...]]:
    """Maximum of e/v over nonempty induced subgraphs, with a witness set.

    A densest subgraph may always be taken induced, so induced enumeration is
    exhaustive. Ties break toward the first witness in Gray-code order.
    """
    if g.n < 1:
        raise DensityError("max_density undefined for the empty graph")
    _check_size(g)
    best = Fraction(-1)
    best_mask = 0
    for mask, edges in _subset_edge_counts(g):
        k = mask.bit_count()
        val = Fraction(edges, k)
        if val > best:
            best, best_mask = val, mask
    return best, _mask_vertices(best_mask)


def max_i_density(g: Graph, i: int) -> tuple[Fraction, tuple[int, ...]]:
    """Maximum of d_i = (e-i+1)/(v-i) over induced subgraphs with >= i+1 vertices."""
    if i not in (1, 2):
        raise DensityError(f"i must be 1 or 2, got {i}")
    if g.n < i + 1:
        raise DensityError(f"max_{i}_density needs at least {i + 1} vertices")
    _check_size(g)
    best: Optional[Fraction] = None
    best_mask = 0
    for mask, edges in _subset_edge_counts(g):
        k = mask.bit_count()
        if k < i + 1:
            continue
        val = Fraction(edges - i + 1, k - i)
        if best is None or val > best:
            best, best_mask = val, mask
    assert best is not None
    return best, _mask_vertices(best_mask)


def is_strictly_balanced(g: Graph) -> bool:
    """True iff every proper subgraph has strictly smaller density.

    Checking proper induced subgraphs on fewer vertices suffices: dropping
    edges at a fixed vertex set only lowers the density.
    """
    if g.n < 1:
        raise DensityError("undefined for the empty graph")
    _check_size(g)
    d = density(g)
    full = (1 << g.n) - 1
    for mask, edges in _subset_edge_counts(g):
        if mask == full:
            continue
        if Fraction(edges, mask.bit_count()) >= d:
            return False
    return True


def is_strictly_i_balanced(g: Graph, i: int) -> bool:
    """True iff every proper subgraph with >= i+1 vertices has smaller d_i."""
    if i not in (1, 2):
        raise DensityError(f"i must be 1 or 2, got {i}")
    if g.n < i + 1:
        raise DensityError(f"needs at least {i + 1} vertices")
    _check_size(g)
    di = Fraction(g.m - i + 1, g.n - i)
    full = (1 << g.n) - 1
    for mask, edges in _subset_edge_counts(g):
        k = mask.bit_count()
        if mask == full or k < i + 1:
            continue
        if Fraction(edges - i + 1, k - i) >= di:
            return False
    return True


@dataclass(frozen=True)
class DensityReport:
    d: Fraction
    m: Fraction
    m_witness: tuple[int, ...]
    m1: Fraction
    m1_witness: tuple[int, ...]
    m2: Optional[Fraction]
    m2_witness: Optional[tuple[int, ...]]
    strictly_balanced: bool
    strictly_1_balanced: bool

    def to_json_dict(self) -> dict:
        out = {
            "d": str(self.d),
            "m": str(self.m),
            "m_witness": list(self.m_witness),
            "m1": str(self.m1),
            "m1_witness": list(self.m1_witness),
            "strictly_balanced": self.strictly_balanced,
            "strictly_1_balanced": self.strictly_1_balanced,
        }
        if self.m2 is not None:
            out["m2"] = str(self.m2)
            out["m2_witness"] = list(self.m2_witness)
        return out


def density_report(g: Graph) -> DensityReport:
    if g.n < 2:
        raise DensityError("density report needs at least 2 vertices")
    m, mw = max_density(g)
    m1, m1w = max_i_density(g, 1)
    m2 = m2w = None
    if g.n >= 3:
        m2, m2w = max_i_density(g, 2)
    return DensityReport(
        d=density(g), m=m, m_witness=mw, m1=m1, m1_witness=m1w,
        m2=m2, m2_witness=m2w,
        strictly_balanced=is_strictly_balanced(g),
        strictly_1_balanced=is_strictly_i_balanced(g, 1),
    )


def threshold_exponent(h: Graph, kind: str) -> Fraction:
    """The magnitude x of the threshold exponent in p = n^(-x) = n^(-1/m_kind)."""
    if kind == "m":
        m, _ = max_density(h)
    elif kind == "m1":
        m, _ = max_i_density(h, 1)
    elif kind == "m2":
        m, _ = max_i_density(h, 2)
    else:
        raise DensityError(f"kind must be one of m, m1, m2, got {kind!r}")
    if m <= 0:
        raise DensityError("threshold exponent undefined for edgeless graphs")
    return 1 / m


def clique_ramsey_constant_bound(b: int, k: int) -> float:
    """(bk)^(2/(k-1)), the constant above which the clique 1-statement holds."""
    if b < 1 or k < 2:
        raise DensityError(f"need b >= 1 and k >= 2, got b={b}, k={k}")
    return float(b * k) ** (2.0 / (k - 1))
