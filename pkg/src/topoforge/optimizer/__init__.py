from .anneal import (SAConfig, SearchResult, cooling_rate, edge_swap_candidate, multi_start,
                     random_start, sa_search, symmetric_orbit)
from .exhaustive import exhaustive_tiny

__all__ = [
    "SAConfig", "SearchResult", "cooling_rate", "edge_swap_candidate", "exhaustive_tiny",
    "multi_start", "random_start", "sa_search", "symmetric_orbit",
]
