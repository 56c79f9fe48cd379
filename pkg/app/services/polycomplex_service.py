from fractions import Fraction
from itertools import combinations
from math import gcd
from typing import Callable, Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple
import cdd
from loguru import logger

from app.core.errors import DegeneratePair, FarFace, NotAComplex, NotInSpan
from app.models.polyhedral import (
    Cell, FaceClass, HRep, OrientationMap, PolyhedralComplex, Vector, VRep,
)
from app.models.ratmatrix import RatMatrix, to_rat
from app.services.exactlin_service import exactlin_service

IntVector = Tuple[int, ...]
ConeHRep = Tuple[List[IntVector], List[IntVector]]

NUMBER_TYPE = "fraction"


def _dot(a: Sequence, b: Sequence):
    return sum(x * y for x, y in zip(a, b))


def _primitive(vec: Iterable[int]) -> IntVector:
    vec = tuple(vec)
    g = 0
    for x in vec:
        g = gcd(g, x)
    if g <= 1:
        return vec
    return tuple(x // g for x in vec)


def _integral(vec: Iterable) -> IntVector:
    """Positive rescaling of a rational vector to a primitive integer vector"""
    vec = [to_rat(x) for x in vec]
    scale = 1
    for x in vec:
        scale = scale * x.denominator // gcd(scale, x.denominator)
    return _primitive(int(x * scale) for x in vec)


def _rational_vector(values: Iterable, what: str) -> Vector:
    try:
        return tuple(to_rat(x) for x in values)
    except (TypeError, ValueError, ZeroDivisionError) as e:
        raise NotAComplex(f"{what} has an entry that is not a rational number: {e}") from e


def _project_out(r: IntVector, basis: Sequence[IntVector]) -> IntVector:
    """Orthogonal projection onto the complement of span(basis), rescaled to integers"""
    if not basis:
        return r
    lin = RatMatrix.from_columns(basis)
    gram = lin.transpose() @ lin
    rhs = lin.transpose() @ RatMatrix.from_columns([r])
    coeffs = exactlin_service.solve_in_span(gram, rhs)
    projected = RatMatrix.from_columns([r]) - lin @ coeffs
    return _integral(projected.column(0))


def double_description(inequalities: Sequence[IntVector], equations: Sequence[IntVector],
                       dim: int) -> Tuple[List[IntVector], List[IntVector]]:
    """Extreme rays and a lineality basis of {y in Q^dim : A y >= 0, E y = 0}.

    The cone goes to cddlib in exact arithmetic as an H-representation with
    the trivial row 1 >= 0 in front. Rays come back as primitive integer
    vectors orthogonal to the lineality space.
    """
    mat = cdd.Matrix([[1] + [0] * dim] + [[0] + list(a) for a in inequalities],
                     number_type=NUMBER_TYPE)
    if equations:
        mat.extend([[0] + list(e) for e in equations], linear=True)
    mat.rep_type = cdd.RepType.INEQUALITY
    generators = cdd.Polyhedron(mat).get_generators()

    lineality: List[IntVector] = []
    extreme: List[IntVector] = []
    for i in range(generators.row_size):
        row = generators[i]
        if row[0] != 0:
            continue
        if i in generators.lin_set:
            lineality.append(_integral(row[1:]))
        else:
            extreme.append(_integral(row[1:]))
    rays: List[IntVector] = []
    for r in extreme:
        projected = _project_out(r, lineality)
        if any(projected) and projected not in rays:
            rays.append(projected)
    return rays, lineality


class PolyComplexService:
    """Double description, face lattices and orientations of homogenized complexes"""

    # Dual descriptions

    def dual_description(self, h: HRep) -> VRep:
        """Vertices, rays and lineality of an inequality description"""
        n = h.ambient_dim
        inequalities = [_integral((-to_rat(b),) + tuple(a)) for a, b in h.inequalities]
        inequalities.append(tuple(int(i == 0) for i in range(n + 1)))
        equations = [_integral((-to_rat(b),) + tuple(a)) for a, b in h.equations]
        rays, lineality = double_description(inequalities, equations, n + 1)
        if not any(r[0] > 0 for r in rays):
            logger.debug("Inequality system is infeasible; returning an empty VRep")
            return VRep(ambient_dim=n)
        lineality_basis = self._canonical_lineality(lineality)
        vertices = sorted(tuple(Fraction(x, r[0]) for x in r[1:]) for r in rays if r[0] > 0)
        far = sorted(tuple(Fraction(x) for x in _integral(r)[1:]) for r in rays if r[0] == 0)
        return VRep(
            ambient_dim=n,
            vertices=tuple(vertices),
            rays=tuple(far),
            lineality=tuple(tuple(Fraction(x) for x in l[1:]) for l in lineality_basis),
        )

    def hrep_from_vrep(self, v: VRep) -> HRep:
        """Irredundant inequalities and equations of a generator description"""
        n = v.ambient_dim
        if v.is_empty:
            return HRep(ambient_dim=n, inequalities=((tuple(Fraction(0) for _ in range(n)), Fraction(1)),))
        generators = [_integral(g) for g in v.homogenized()]
        lineality = [_integral((Fraction(0),) + tuple(l)) for l in v.lineality]
        normals, orthogonal = double_description(generators, lineality, n + 1)
        inequalities = sorted(
            (tuple(Fraction(x) for x in y[1:]), Fraction(-y[0])) for y in normals if any(y[1:])
        )
        equations = [
            (tuple(Fraction(x) for x in y[1:]), Fraction(-y[0]))
            for y in self._canonical_lineality(orthogonal)
        ]
        return HRep(ambient_dim=n, inequalities=tuple(inequalities), equations=tuple(equations))

    def _canonical_lineality(self, vectors: Sequence[IntVector]) -> List[IntVector]:
        if not vectors:
            return []
        reduced, _, rank = exactlin_service.rref(RatMatrix.from_rows(vectors))
        return [_integral(reduced.row(i)) for i in range(rank)]

    # Complexes

    def normalize_ray(self, ray: Sequence) -> Vector:
        """Vertices get leading coordinate 1, far rays become primitive integer vectors"""
        vec = _rational_vector(ray, "ray")
        if vec[0] < 0:
            raise NotAComplex(f"ray {vec} has a negative homogenizing coordinate")
        if vec[0] > 0:
            return tuple(x / vec[0] for x in vec)
        if not any(vec):
            raise NotAComplex("zero vector given as a ray")
        return tuple(Fraction(x) for x in _integral(vec))

    def build_complex(self, rays: Sequence[Sequence], lineality: Sequence[Sequence],
                      maximal_cells: Sequence[Iterable[int]],
                      ambient_dim: Optional[int] = None) -> PolyhedralComplex:
        """Close the maximal cones under faces and check the complex property"""
        normalized = [self.normalize_ray(r) for r in rays]
        if ambient_dim is None:
            if not normalized:
                raise NotAComplex("ambient_dim is required for a complex without rays")
            ambient_dim = len(normalized[0]) - 1
        if any(len(r) != ambient_dim + 1 for r in normalized):
            raise NotAComplex(f"every ray needs {ambient_dim + 1} homogenized coordinates")
        if len(set(normalized)) != len(normalized):
            raise NotAComplex("rays are not distinct after normalization")
        lin_vectors = [_rational_vector(l, "lineality generator") for l in lineality]
        if any(len(l) != ambient_dim + 1 or l[0] != 0 for l in lin_vectors):
            raise NotAComplex("lineality generators need a leading coordinate of 0")
        lin_basis = [tuple(Fraction(x) for x in l) for l in self._canonical_lineality(
            [_integral(l) for l in lin_vectors])]

        maximal = [frozenset(c) for c in maximal_cells]
        for cell in maximal:
            bad = [i for i in cell if not 0 <= i < len(normalized)]
            if bad:
                raise NotAComplex(f"cell refers to unknown rays {bad}")
        if len(set(maximal)) != len(maximal):
            raise NotAComplex("duplicate maximal cells")

        int_rays = [_integral(r) for r in normalized]
        int_lin = [_integral(l) for l in lin_basis]
        hreps: Dict[FrozenSet[int], ConeHRep] = {}

        def hrep(cell: FrozenSet[int]) -> ConeHRep:
            if cell not in hreps:
                hreps[cell] = double_description([int_rays[i] for i in sorted(cell)], int_lin, ambient_dim + 1)
            return hreps[cell]

        facets: Dict[FrozenSet[int], List[FrozenSet[int]]] = {}
        dims: Dict[FrozenSet[int], int] = {}
        lattices: List[Set[FrozenSet[int]]] = []
        for cell in maximal:
            top_rank = exactlin_service.rank(RatMatrix.from_rows(
                [normalized[i] for i in cell] + lin_basis, ambient_dim + 1))
            dims.setdefault(cell, top_rank - 1)
            lattice = self._close_under_faces(cell, int_rays, hrep, facets, dims)
            for i in cell:
                if frozenset([i]) not in lattice:
                    raise NotAComplex(f"ray {i} is not extreme in cell {sorted(cell)}")
            lattices.append(lattice)

        for (a, la), (b, lb) in combinations(zip(maximal, lattices), 2):
            if b in la or a in lb:
                raise NotAComplex(f"cell {sorted(a)} and cell {sorted(b)} are nested")
            meet = a & b
            if meet not in la or meet not in lb:
                raise NotAComplex(
                    f"cells {sorted(a)} and {sorted(b)} meet in {sorted(meet)}, which is not a face of both")
            if not self._meet_is_common_face(a, b, int_rays, hrep):
                raise NotAComplex(
                    f"cells {sorted(a)} and {sorted(b)} overlap beyond their common face {sorted(meet)}")

        faces = set().union(*lattices) if lattices else set()
        cells = sorted((Cell(rays=f, dim=dims[f]) for f in faces), key=lambda c: c.sort_key)
        index = {c.rays: i for i, c in enumerate(cells)}
        relations = frozenset(
            (index[g], index[f]) for f in faces if f for g in facets.get(f, ()) if g
        )
        pc = PolyhedralComplex(
            ambient_dim=ambient_dim,
            rays=tuple(normalized),
            lineality=tuple(lin_basis),
            maximal_cells=tuple(maximal),
            cells=tuple(cells),
            face_relations=relations,
        )
        logger.debug(f"Built complex in Q^{ambient_dim}: {len(normalized)} rays, "
                     f"{len(maximal)} maximal cells, {len(cells)} cells")
        return pc

    def _close_under_faces(self, cell: FrozenSet[int], rays: Sequence[IntVector],
                           hrep: Callable[[FrozenSet[int]], ConeHRep],
                           facets: Dict[FrozenSet[int], List[FrozenSet[int]]],
                           dims: Dict[FrozenSet[int], int]) -> Set[FrozenSet[int]]:
        seen = {cell}
        stack = [cell]
        while stack:
            current = stack.pop()
            if current not in facets:
                facets[current] = self._cone_facets(current, rays, hrep)
            for f in facets[current]:
                dims.setdefault(f, dims[current] - 1)
                if f not in seen:
                    seen.add(f)
                    stack.append(f)
        return seen

    def _cone_facets(self, cell: FrozenSet[int], rays: Sequence[IntVector],
                     hrep: Callable[[FrozenSet[int]], ConeHRep]) -> List[FrozenSet[int]]:
        """Facets of cone(cell) + lineality from the extreme rays of its dual cone"""
        if not cell:
            return []
        normals, _ = hrep(cell)
        return sorted({frozenset(i for i in cell if _dot(y, rays[i]) == 0) for y in normals},
                      key=lambda f: sorted(f))

    def _meet_is_common_face(self, a: FrozenSet[int], b: FrozenSet[int], rays: Sequence[IntVector],
                             hrep: Callable[[FrozenSet[int]], ConeHRep]) -> bool:
        """Whether cone(a) and cone(b) intersect exactly in cone(a & b).

        A facet normal or equation y of one cone that is <= 0 on the other
        confines the intersection to the two faces cut out by y; when either
        face lies in the meet the check is done. Otherwise the intersection is
        computed and each of its generators is tested against cone(a & b).
        """
        meet = a & b
        for first, second in ((a, b), (b, a)):
            normals, equations = hrep(first)
            candidates = normals + equations + [tuple(-x for x in e) for e in equations]
            for y in candidates:
                values = {i: _dot(y, rays[i]) for i in second}
                if any(v > 0 for v in values.values()):
                    continue
                if ({i for i in first if _dot(y, rays[i]) == 0} <= meet
                        or {i for i, v in values.items() if v == 0} <= meet):
                    return True

        normals_a, equations_a = hrep(a)
        normals_b, equations_b = hrep(b)
        extreme, lines = double_description(normals_a + normals_b, equations_a + equations_b, len(rays[0]))
        normals_m, equations_m = hrep(meet)
        for r in extreme:
            if any(_dot(e, r) for e in equations_m) or any(_dot(y, r) < 0 for y in normals_m):
                return False
        for l in lines:
            if any(_dot(e, l) for e in equations_m) or any(_dot(y, l) for y in normals_m):
                return False
        return True

    # Queries

    def classify_faces(self, pc: PolyhedralComplex) -> FaceClass:
        far = frozenset(i for i in range(len(pc.cells)) if pc.is_far(i))
        bounded = frozenset(pc.bounded_ids)
        unbounded = frozenset(i for i in pc.non_far_ids if i not in bounded)
        return FaceClass(far_faces=far, bounded_faces=bounded, unbounded_faces=unbounded)

    def f_vector(self, pc: PolyhedralComplex) -> List[int]:
        counts = [0] * (pc.dim + 1)
        for i in pc.non_far_ids:
            counts[pc.cells[i].dim] += 1
        return counts

    def bounded_f_vector(self, pc: PolyhedralComplex) -> List[int]:
        counts = [0] * (pc.dim + 1)
        for i in pc.bounded_ids:
            counts[pc.cells[i].dim] += 1
        return counts

    def span_basis(self, pc: PolyhedralComplex, cell_id: int) -> RatMatrix:
        """Basis of L(sigma), the linear space parallel to a non-far cell, in Q^n"""
        if pc.is_far(cell_id) or not pc.cells[cell_id].rays:
            raise FarFace(f"cell {pc.cells[cell_id].label()} is far; it has no parallel space")
        rays = [pc.rays[i] for i in sorted(pc.cells[cell_id].rays)]
        vertices = [r[1:] for r in rays if r[0] != 0]
        base = vertices[0]
        directions = [tuple(x - y for x, y in zip(v, base)) for v in vertices[1:]]
        directions += [r[1:] for r in rays if r[0] == 0]
        directions += [l[1:] for l in pc.lineality]
        return exactlin_service.column_basis(RatMatrix.from_columns(directions, pc.ambient_dim))

    def reference_basis(self, pc: PolyhedralComplex, cell_id: int) -> RatMatrix:
        """Ordered basis of the span of a cone: lineality first, then RREF-canonical span vectors"""
        size = pc.ambient_dim + 1
        generators = [pc.rays[i] for i in sorted(pc.cells[cell_id].rays)] + list(pc.lineality)
        span = exactlin_service.column_basis(RatMatrix.from_columns(generators, size))
        chosen = [tuple(l) for l in pc.lineality]
        for column in span.to_columns():
            candidate = RatMatrix.from_columns(chosen + [column], size)
            if exactlin_service.rank(candidate) > len(chosen):
                chosen.append(column)
        return RatMatrix.from_columns(chosen, size)

    def orientations(self, pc: PolyhedralComplex,
                     flips: FrozenSet[int] = frozenset()) -> OrientationMap:
        """Signs comparing (inward vector, orientation of tau) with the orientation of sigma.

        Cells listed in `flips` have the first vector of their reference basis
        negated, which reverses their orientation.
        """
        bases: Dict[int, RatMatrix] = {}

        def basis_of(cell_id: int) -> RatMatrix:
            if cell_id not in bases:
                basis = self.reference_basis(pc, cell_id)
                if cell_id in flips and basis.cols:
                    columns = basis.to_columns()
                    columns[0] = tuple(-x for x in columns[0])
                    basis = RatMatrix.from_columns(columns, basis.rows)
                bases[cell_id] = basis
            return bases[cell_id]

        signs: Dict[Tuple[int, int], int] = {}
        for tau, sigma in sorted(pc.face_relations):
            outside = pc.cells[sigma].rays - pc.cells[tau].rays
            w = tuple(sum(col) for col in zip(*(pc.rays[i] for i in outside)))
            frame = RatMatrix.hstack([RatMatrix.from_columns([w]), basis_of(tau)])
            try:
                coords = exactlin_service.solve_in_span(basis_of(sigma), frame)
            except NotInSpan as e:
                raise DegeneratePair(f"face pair {pc.cells[tau].label()} < {pc.cells[sigma].label()}: {e}") from e
            sign = exactlin_service.sign_det(coords) if coords.rows == coords.cols else 0
            if sign == 0:
                raise DegeneratePair(
                    f"face pair {pc.cells[tau].label()} < {pc.cells[sigma].label()} "
                    f"does not give a basis of the larger cone")
            signs[(tau, sigma)] = sign
        return OrientationMap(signs=signs)


# Create a singleton instance
polycomplex_service = PolyComplexService()
