from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, List, Tuple

import networkx as nx


def _mask(elements: Iterable[int]) -> int:
    out = 0
    for e in elements:
        out |= 1 << e
    return out


def _popcount(mask: int) -> int:
    return bin(mask).count("1")


@dataclass(frozen=True)
class Flat:
    elements: FrozenSet[int]
    rank: int

    @property
    def sort_key(self) -> Tuple[int, Tuple[int, ...]]:
        return (self.rank, tuple(sorted(self.elements)))


@dataclass(frozen=True)
class Matroid:
    """A matroid on {0..n-1} given by its bases.

    Rank and closure are evaluated against the basis list, so they are exact
    but cost one pass over the bases per call.
    """
    n_elements: int
    bases: Tuple[FrozenSet[int], ...]
    _closures: Dict[int, int] = field(default_factory=dict, init=False, repr=False, compare=False, hash=False)

    @property
    def rank(self) -> int:
        return len(self.bases[0]) if self.bases else 0

    @property
    def ground_set(self) -> FrozenSet[int]:
        return frozenset(range(self.n_elements))

    @cached_property
    def _basis_masks(self) -> Tuple[int, ...]:
        return tuple(_mask(b) for b in self.bases)

    def _rank_of_mask(self, mask: int) -> int:
        return max((_popcount(b & mask) for b in self._basis_masks), default=0)

    def rank_of(self, subset: Iterable[int]) -> int:
        """Size of the largest independent subset"""
        return self._rank_of_mask(_mask(subset))

    def _closure_mask(self, mask: int) -> int:
        if mask not in self._closures:
            r = self._rank_of_mask(mask)
            closed = mask
            for e in range(self.n_elements):
                bit = 1 << e
                if not mask & bit and self._rank_of_mask(mask | bit) == r:
                    closed |= bit
            self._closures[mask] = closed
        return self._closures[mask]

    def closure(self, subset: Iterable[int]) -> FrozenSet[int]:
        closed = self._closure_mask(_mask(subset))
        return frozenset(e for e in range(self.n_elements) if closed >> e & 1)

    def is_basis_exchange_valid(self) -> bool:
        """For bases A, B and a in A - B there is b in B - A with A - a + b a basis"""
        basis_set = set(self.bases)
        for a_basis, b_basis in combinations(self.bases, 2):
            for first, second in ((a_basis, b_basis), (b_basis, a_basis)):
                for a in first - second:
                    if not any((first - {a}) | {b} in basis_set for b in second - first):
                        return False
        return True

    def exchange_graph(self) -> nx.Graph:
        """Elements joined when one can replace the other in some basis"""
        graph = nx.Graph()
        graph.add_nodes_from(range(self.n_elements))
        basis_set = set(self.bases)
        for basis in self.bases:
            for e in basis:
                for f in range(self.n_elements):
                    if f not in basis and not graph.has_edge(e, f) and (basis - {e}) | {f} in basis_set:
                        graph.add_edge(e, f)
        return graph

    def components(self) -> List[FrozenSet[int]]:
        return sorted((frozenset(c) for c in nx.connected_components(self.exchange_graph())),
                      key=lambda c: min(c))

    def is_connected(self) -> bool:
        if self.n_elements <= 1:
            return True
        return nx.is_connected(self.exchange_graph())

    def to_json(self) -> dict:
        return {"n": self.n_elements, "bases": [sorted(b) for b in self.bases]}
