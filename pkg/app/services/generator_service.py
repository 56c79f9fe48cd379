from itertools import combinations, product
from typing import Dict, FrozenSet, Iterable, List, Sequence, Tuple
from loguru import logger

import networkx as nx

from app.core.config import settings
from app.core.errors import DisconnectedMatroid, InvalidMatroid, InvalidRank
from app.models.matroid import Flat, Matroid
from app.models.polyhedral import PolyhedralComplex
from app.models.tropical import Convention
from app.services.polycomplex_service import polycomplex_service

Edge = Tuple[int, int]


class GeneratorService:
    """Builders for polytopal complexes, matroids and Bergman fans"""

    def cube_complex(self, d: int) -> PolyhedralComplex:
        """All faces of [0,1]^d as a bounded polyhedral complex"""
        if d < 0:
            raise InvalidRank(f"cube dimension must be non-negative, got {d}")
        vertices = [(1,) + v for v in product((0, 1), repeat=d)]
        logger.debug(f"Building the {d}-cube from {len(vertices)} vertices")
        return polycomplex_service.build_complex(
            vertices, [], [range(len(vertices))], ambient_dim=d)

    # Matroids

    def matroid(self, n_elements: int, bases: Iterable[Iterable[int]]) -> Matroid:
        """Validate a basis list and wrap it as a Matroid"""
        if n_elements < 0:
            raise InvalidMatroid(f"ground set size must be non-negative, got {n_elements}")
        normalized = sorted({frozenset(b) for b in bases}, key=lambda b: sorted(b))
        if not normalized:
            raise InvalidMatroid("a matroid needs at least one basis")
        sizes = {len(b) for b in normalized}
        if len(sizes) != 1:
            raise InvalidMatroid(f"bases have different sizes {sorted(sizes)}")
        for b in normalized:
            if any(not 0 <= e < n_elements for e in b):
                raise InvalidMatroid(f"basis {sorted(b)} is not contained in 0..{n_elements - 1}")
        m = Matroid(n_elements=n_elements, bases=tuple(normalized))
        if n_elements <= settings.MATROID_EXCHANGE_CHECK_LIMIT and not m.is_basis_exchange_valid():
            raise InvalidMatroid("the bases violate the basis exchange axiom")
        return m

    def uniform_matroid(self, r: int, n: int) -> Matroid:
        if not 0 <= r <= n:
            raise InvalidRank(f"uniform matroid U({r},{n}) needs 0 <= r <= n")
        return Matroid(n_elements=n, bases=tuple(frozenset(c) for c in combinations(range(n), r)))

    def complete_graph(self, k: int) -> List[Edge]:
        if k < 1:
            raise InvalidRank(f"complete graph needs at least one vertex, got {k}")
        return sorted(tuple(sorted(e)) for e in nx.complete_graph(k).edges())

    def graphic_matroid(self, edges: Sequence[Edge]) -> Matroid:
        """Cycle matroid: ground set = edge indices, bases = spanning forests"""
        graph = nx.MultiGraph()
        graph.add_edges_from(edges)
        rank = graph.number_of_nodes() - nx.number_connected_components(graph)
        bases = []
        for subset in combinations(range(len(edges)), rank):
            forest = nx.MultiGraph()
            forest.add_nodes_from(graph.nodes())
            forest.add_edges_from(edges[i] for i in subset)
            if nx.is_forest(forest):
                bases.append(frozenset(subset))
        logger.debug(f"Graphic matroid on {len(edges)} edges has rank {rank} and {len(bases)} bases")
        return Matroid(n_elements=len(edges), bases=tuple(bases))

    def flats(self, m: Matroid) -> List[Flat]:
        """Every closed set, graded by rank, from closure(empty set) up to the ground set"""
        if m.n_elements > settings.MAX_FLAT_GROUND_SET:
            raise InvalidMatroid(
                f"ground set of size {m.n_elements} exceeds MAX_FLAT_GROUND_SET={settings.MAX_FLAT_GROUND_SET}")
        layer = {m.closure(())}
        found: List[Flat] = [Flat(elements=f, rank=0) for f in layer]
        for r in range(1, m.rank + 1):
            layer = {m.closure(f | {e}) for f in layer for e in m.ground_set - f}
            found.extend(Flat(elements=f, rank=r) for f in layer)
        return sorted(found, key=lambda f: f.sort_key)

    def flag_chains(self, flats: Sequence[Flat]) -> List[Tuple[Flat, ...]]:
        """Maximal chains F_1 < ... < F_k of the given flats, each step raising the rank by one"""
        if not flats:
            return [()]
        by_rank: Dict[int, List[Flat]] = {}
        for f in flats:
            by_rank.setdefault(f.rank, []).append(f)
        low, high = min(by_rank), max(by_rank)
        chains: List[Tuple[Flat, ...]] = []

        def extend(chain: Tuple[Flat, ...]) -> None:
            top = chain[-1]
            if top.rank == high:
                chains.append(chain)
                return
            for f in by_rank.get(top.rank + 1, []):
                if top.elements < f.elements:
                    extend(chain + (f,))

        for f in by_rank[low]:
            extend((f,))
        return chains

    def bergman_fan(self, m: Matroid, convention: Convention = Convention.MAX) -> PolyhedralComplex:
        """Fine subdivision of the Bergman fan, modulo the all-ones lineality.

        One cone per chain of proper nonempty flats, spanned by the indicator
        vectors e_F (negated under the Min convention) after the projection
        x -> (x_1 - x_0, ..., x_{n-1} - x_0).
        """
        if m.rank < 1:
            raise InvalidRank("the Bergman fan needs a matroid of rank at least 1")
        if not m.is_connected():
            raise DisconnectedMatroid(
                f"matroid has components {[sorted(c) for c in m.components()]}; the Bergman fan needs a connected one")
        n = m.n_elements
        sign = 1 if convention is Convention.MAX else -1
        proper = [f for f in self.flats(m) if f.elements and len(f.elements) < n]
        rays = [tuple([1] + [0] * (n - 1))]
        ray_of: Dict[FrozenSet[int], int] = {}
        for f in proper:
            base = int(0 in f.elements)
            rays.append((0,) + tuple(sign * (int(i in f.elements) - base) for i in range(1, n)))
            ray_of[f.elements] = len(rays) - 1
        maximal = [
            frozenset([0] + [ray_of[f.elements] for f in chain])
            for chain in self.flag_chains(proper)
        ]
        logger.info(f"Bergman fan of a rank {m.rank} matroid on {n} elements: "
                    f"{len(proper)} rays, {len(maximal)} maximal cones")
        return polycomplex_service.build_complex(rays, [], maximal, ambient_dim=n - 1)


# Create a singleton instance
generator_service = GeneratorService()
