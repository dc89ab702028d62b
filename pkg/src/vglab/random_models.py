"""G(n,p) sampling, the random graph process, and hitting times.

All randomness flows through numpy's SeedSequence: per-sample streams are
derived from (master seed, sample index), so parallel experiment runs are
reproducible and order-independent.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .graph import Graph

INFINITY = -1  # sentinel index for "property never holds"


def rng_for(master_seed: int, index: int = 0) -> np.random.Generator:
    """Independent generator for sample `index` under `master_seed`."""
    return np.random.default_rng(np.random.SeedSequence(master_seed, spawn_key=(index,)))


def _edge_table(n: int) -> np.ndarray:
    """All edges of K_n in lexicographic order, as an (m, 2) array."""
    iu = np.triu_indices(n, k=1)
    return np.column_stack(iu)


def sample_gnp(n: int, p: float, seed: int = 0, index: int = 0) -> Graph:
    """Binomial random graph: each potential edge kept with probability p."""
    if not (0.0 <= p <= 1.0):
        raise ValueError(f"p must be in [0,1], got {p}")
    rng = rng_for(seed, index)
    m = n * (n - 1) // 2
    if m == 0:
        return Graph(n, [])
    k = rng.binomial(m, p)
    idx = rng.choice(m, size=k, replace=False)
    table = _edge_table(n)
    chosen = table[np.sort(idx)]
    return Graph(n, [(int(u), int(v)) for u, v in chosen])


@dataclass
class ProcessRun:
    """A random graph process: a permutation of the edge slots of K_n."""

    n: int
    order: np.ndarray  # permutation of range(m), order[i] = i-th edge index
    seed: int
    index: int = 0

    @property
    def m(self) -> int:
        return self.n * (self.n - 1) // 2

    def edge_at(self, i: int) -> tuple[int, int]:
        table = _edge_table(self.n)
        u, v = table[self.order[i]]
        return int(u), int(v)

    def edges_prefix(self, i: int) -> list[tuple[int, int]]:
        if not (0 <= i <= self.m):
            raise ValueError(f"prefix index {i} out of range 0..{self.m}")
        table = _edge_table(self.n)
        sel = table[self.order[:i]]
        return [(int(u), int(v)) for u, v in sel]

    def serialize(self) -> str:
        head = f"{self.n} {self.seed} {self.index}"
        return head + "\n" + " ".join(str(int(x)) for x in self.order) + "\n"


def parse_process(text: str) -> ProcessRun:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    n, seed, index = (int(x) for x in lines[0].split())
    order = np.array([int(x) for x in lines[1].split()], dtype=np.int64)
    run = ProcessRun(n=n, order=order, seed=seed, index=index)
    if sorted(order.tolist()) != list(range(run.m)):
        raise ValueError("order is not a permutation of the edge slots")
    return run


def sample_process(n: int, seed: int = 0, index: int = 0) -> ProcessRun:
    rng = rng_for(seed, index)
    m = n * (n - 1) // 2
    return ProcessRun(n=n, order=rng.permutation(m), seed=seed, index=index)


def prefix_graph(run: ProcessRun, i: int) -> Graph:
    """The graph after the first i edges of the process."""
    return Graph(run.n, run.edges_prefix(i))


@dataclass
class HittingTimeResult:
    property_name: str
    tau: int  # INFINITY if the property never holds

    @property
    def never(self) -> bool:
        return self.tau == INFINITY


def hitting_time(run: ProcessRun, predicate: Callable[[Graph], bool],
                 monotone: bool = False, name: str = "property",
                 lo: int = 0) -> HittingTimeResult:
    """Minimal i with predicate(G_i) true; INFINITY sentinel if none.

    Monotone predicates are located by binary search over prefixes (which
    must agree with the linear scan); general predicates are scanned
    linearly.
    """
    m = run.m
    if not monotone:
        for i in range(lo, m + 1):
            if predicate(prefix_graph(run, i)):
                return HittingTimeResult(name, i)
        return HittingTimeResult(name, INFINITY)
    if not predicate(prefix_graph(run, m)):
        return HittingTimeResult(name, INFINITY)
    lo_i, hi = lo, m  # invariant: predicate true at hi
    if predicate(prefix_graph(run, lo_i)):
        return HittingTimeResult(name, lo_i)
    while hi - lo_i > 1:
        mid = (lo_i + hi) // 2
        if predicate(prefix_graph(run, mid)):
            hi = mid
        else:
            lo_i = mid
    return HittingTimeResult(name, hi)


def hitting_time_linear(run: ProcessRun, predicate, name: str = "property") -> HittingTimeResult:
    return hitting_time(run, predicate, monotone=False, name=name)


def threshold_probability(c: float, n: int, exponent_num: int, exponent_den: int) -> float:
    """p = c * n^(-num/den), the paper-style parameterization of p."""
    return c * float(n) ** (-exponent_num / exponent_den)
