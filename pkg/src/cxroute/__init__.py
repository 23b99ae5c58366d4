"""Commutation-aware quantum circuit mapping with SWAP and Bridge insertion."""

from .circuit import (CX, Bridge, Circuit, Gate, H, Layout, MappingResult, MappingStats, Original,
                      RoutedCircuit, RoutingError, Rx, Rz, Swap, expand_bridge, expand_swap, layout_swap,
                      stats)
from .coupling import CouplingGraph, from_edges, grid, lnn, middles, t4
from .depgraph import Rules, build, reduce_transitive
from .exact import solve_exact
from .heuristic import HeuristicParams, postprocess_leading_swaps, route_heuristic

__version__ = "0.1.0"
