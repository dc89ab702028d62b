"""vglab: exact solving, strategies, and experiments for vertex positional games."""

__version__ = "0.1.0"

from .graph import Graph, disjoint_union, parse_graph, serialize_graph, to_dot
from .catalog import CatalogId, make_catalog_graph, h_chain, h_cycle

__all__ = [
    "Graph", "disjoint_union", "parse_graph", "serialize_graph", "to_dot",
    "CatalogId", "make_catalog_graph", "h_chain", "h_cycle",
]
