"""Polyhedral complexes stored as fans in Q^(n+1), coordinate 0 homogenizing."""
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Dict, FrozenSet, List, Tuple

Vector = Tuple[Fraction, ...]


@dataclass(frozen=True)
class HRep:
    """{x : a.x >= b for every inequality, a.x == b for every equation}"""
    ambient_dim: int
    inequalities: Tuple[Tuple[Vector, Fraction], ...] = ()
    equations: Tuple[Tuple[Vector, Fraction], ...] = ()


@dataclass(frozen=True)
class VRep:
    """conv(vertices) + cone(rays) + span(lineality); no vertices means empty"""
    ambient_dim: int
    vertices: Tuple[Vector, ...] = ()
    rays: Tuple[Vector, ...] = ()
    lineality: Tuple[Vector, ...] = ()

    @property
    def is_empty(self) -> bool:
        return not self.vertices

    def homogenized(self) -> List[Vector]:
        """Generators as vectors in Q^(n+1), vertices first"""
        one, zero = Fraction(1), Fraction(0)
        return [(one,) + v for v in self.vertices] + [(zero,) + r for r in self.rays]


@dataclass(frozen=True)
class Cell:
    rays: FrozenSet[int]
    dim: int

    @property
    def sort_key(self) -> Tuple[int, Tuple[int, ...]]:
        return (self.dim, tuple(sorted(self.rays)))

    def label(self) -> str:
        return "{" + ",".join(str(i) for i in sorted(self.rays)) + "}"


@dataclass(frozen=True)
class FaceClass:
    far_faces: FrozenSet[int]
    bounded_faces: FrozenSet[int]
    unbounded_faces: FrozenSet[int]


@dataclass(frozen=True)
class PolyhedralComplex:
    """Cells are ray-index sets ordered by (dim, sorted rays); that order fixes the cell ids"""
    ambient_dim: int
    rays: Tuple[Vector, ...]
    lineality: Tuple[Vector, ...]
    maximal_cells: Tuple[FrozenSet[int], ...]
    cells: Tuple[Cell, ...]
    face_relations: FrozenSet[Tuple[int, int]] = field(repr=False)

    @property
    def dim(self) -> int:
        return max((c.dim for c in self.cells), default=-1)

    @cached_property
    def _index(self) -> Dict[FrozenSet[int], int]:
        return {c.rays: i for i, c in enumerate(self.cells)}

    def cell_id(self, rays) -> int:
        return self._index[frozenset(rays)]

    @property
    def all_cells(self) -> List[List[FrozenSet[int]]]:
        """Ray-index sets per dimension 0..dim"""
        return [[self.cells[i].rays for i in self.cells_of_dim(d)] for d in range(self.dim + 1)]

    def cells_of_dim(self, d: int) -> List[int]:
        return [i for i, c in enumerate(self.cells) if c.dim == d and c.rays]

    def is_far_ray(self, r: int) -> bool:
        return self.rays[r][0] == 0

    def is_far(self, cell_id: int) -> bool:
        rays = self.cells[cell_id].rays
        return bool(rays) and all(self.is_far_ray(r) for r in rays)

    def is_bounded(self, cell_id: int) -> bool:
        """No far rays and no lineality"""
        rays = self.cells[cell_id].rays
        return bool(rays) and not self.lineality and not any(self.is_far_ray(r) for r in rays)

    @cached_property
    def non_far_ids(self) -> Tuple[int, ...]:
        return tuple(i for i, c in enumerate(self.cells) if c.rays and not self.is_far(i))

    @cached_property
    def bounded_ids(self) -> Tuple[int, ...]:
        return tuple(i for i in range(len(self.cells)) if self.is_bounded(i))

    @cached_property
    def face_pairs(self) -> Tuple[Tuple[int, int], ...]:
        """Every (tau, sigma) with tau a proper non-empty face of sigma"""
        pairs = []
        for s, sigma in enumerate(self.cells):
            for t, tau in enumerate(self.cells):
                if tau.rays and tau.dim < sigma.dim and tau.rays < sigma.rays:
                    pairs.append((t, s))
        return tuple(sorted(pairs))

    @cached_property
    def _faces(self) -> Dict[int, Tuple[int, ...]]:
        out: Dict[int, List[int]] = {i: [] for i in range(len(self.cells))}
        for t, s in self.face_pairs:
            out[s].append(t)
        return {k: tuple(v) for k, v in out.items()}

    @cached_property
    def _cofaces(self) -> Dict[int, Tuple[int, ...]]:
        out: Dict[int, List[int]] = {i: [] for i in range(len(self.cells))}
        for t, s in self.face_pairs:
            out[t].append(s)
        return {k: tuple(v) for k, v in out.items()}

    def faces_of(self, cell_id: int) -> Tuple[int, ...]:
        """Proper non-empty faces"""
        return self._faces[cell_id]

    def cofaces_of(self, cell_id: int) -> Tuple[int, ...]:
        """Cells having this one as a proper face"""
        return self._cofaces[cell_id]

    @cached_property
    def facets_of(self) -> Dict[int, Tuple[int, ...]]:
        out: Dict[int, List[int]] = {i: [] for i in range(len(self.cells))}
        for t, s in sorted(self.face_relations):
            out[s].append(t)
        return {k: tuple(v) for k, v in out.items()}


@dataclass(frozen=True)
class OrientationMap:
    """Signs O(tau, sigma) for codimension-one face pairs; absent pairs are 0"""
    signs: Dict[Tuple[int, int], int] = field(hash=False)

    def __call__(self, tau: int, sigma: int) -> int:
        return self.signs.get((tau, sigma), 0)

    def check(self, pc: PolyhedralComplex) -> List[Tuple[int, int]]:
        """(gamma, sigma) pairs, two dimensions apart, whose signed sum through the middle faces is non-zero"""
        failures = []
        for s in range(len(pc.cells)):
            for g in {g for t in pc.facets_of[s] for g in pc.facets_of[t]}:
                total = sum(self(g, t) * self(t, s) for t in pc.facets_of[s] if g in pc.facets_of[t])
                if total:
                    failures.append((g, s))
        return sorted(failures)
