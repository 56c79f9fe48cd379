import random
from fractions import Fraction

import pytest

from app.core.errors import FarFace, NotAComplex
from app.models.chain import Variant
from app.models.polyhedral import HRep, VRep
from app.models.ratmatrix import RatMatrix
from app.models.sheaf import SheafKind
from app.services.chain_service import chain_service
from app.services.exactlin_service import exactlin_service
from app.services.polycomplex_service import double_description, polycomplex_service


def unit_cube_hrep(d):
    inequalities = []
    for i in range(d):
        e = tuple(Fraction(int(i == j)) for j in range(d))
        inequalities.append((e, Fraction(0)))
        inequalities.append((tuple(-x for x in e), Fraction(-1)))
    return HRep(ambient_dim=d, inequalities=tuple(inequalities))


def test_double_description_of_the_positive_orthant():
    rays, lineality = double_description([(1, 0, 0), (0, 1, 0)], [], 3)
    assert sorted(rays) == [(0, 1, 0), (1, 0, 0)]
    assert len(lineality) == 1
    assert lineality[0][:2] == (0, 0)


def test_dual_description_of_the_cube():
    v = polycomplex_service.dual_description(unit_cube_hrep(3))
    assert len(v.vertices) == 8
    assert v.rays == ()
    assert v.lineality == ()
    assert set(v.vertices) == {(a, b, c) for a in (0, 1) for b in (0, 1) for c in (0, 1)}


def test_dual_description_of_a_half_line():
    v = polycomplex_service.dual_description(HRep(ambient_dim=1, inequalities=(((Fraction(1),), Fraction(0)),)))
    assert v.vertices == ((0,),)
    assert v.rays == ((1,),)


def test_dual_description_of_a_region_with_equation():
    # the corner region where 0 and x+5 tie in max(0, x+5, y+3, x+y+9)
    h = HRep(
        ambient_dim=2,
        inequalities=(((Fraction(0), Fraction(-1)), Fraction(3)), ((Fraction(-1), Fraction(-1)), Fraction(9))),
        equations=(((Fraction(1), Fraction(0)), Fraction(-5)),),
    )
    v = polycomplex_service.dual_description(h)
    assert v.vertices == ((-5, -4),)
    assert v.rays == ((0, -1),)


def test_dual_description_of_an_infeasible_system():
    h = HRep(ambient_dim=1, inequalities=(((Fraction(1),), Fraction(1)), ((Fraction(-1),), Fraction(0))))
    assert polycomplex_service.dual_description(h).is_empty


def test_dual_description_with_lineality():
    # the half plane x >= 0 in Q^2
    v = polycomplex_service.dual_description(HRep(ambient_dim=2, inequalities=(((Fraction(1), Fraction(0)), Fraction(0)),)))
    assert v.vertices == ((0, 0),)
    assert v.rays == ((1, 0),)
    assert len(v.lineality) == 1
    assert v.lineality[0][0] == 0


def test_hrep_round_trip_of_the_cube():
    cube = unit_cube_hrep(3)
    h = polycomplex_service.hrep_from_vrep(polycomplex_service.dual_description(cube))
    assert len(h.inequalities) == 6
    assert h.equations == ()
    again = polycomplex_service.dual_description(h)
    assert set(again.vertices) == set(polycomplex_service.dual_description(cube).vertices)


def test_hrep_of_a_segment_has_an_equation():
    v = VRep(ambient_dim=2, vertices=((Fraction(0), Fraction(0)), (Fraction(1), Fraction(1))))
    h = polycomplex_service.hrep_from_vrep(v)
    assert len(h.equations) == 1
    assert len(h.inequalities) == 2


def test_build_complex_of_a_half_line():
    pc = polycomplex_service.build_complex([(1, 0), (0, 1)], [], [[0, 1]])
    assert [sorted(c.rays) for c in pc.cells] == [[], [0], [1], [0, 1]]
    assert [c.dim for c in pc.cells] == [-1, 0, 0, 1]
    faces = polycomplex_service.classify_faces(pc)
    assert faces.far_faces == {2}
    assert faces.bounded_faces == {1}
    assert faces.unbounded_faces == {3}


def test_cube_face_counts(cube3):
    assert polycomplex_service.f_vector(cube3) == [8, 12, 6, 1]
    assert polycomplex_service.bounded_f_vector(cube3) == [8, 12, 6, 1]
    faces = polycomplex_service.classify_faces(cube3)
    assert len(faces.bounded_faces) == 27
    assert not faces.far_faces
    assert not faces.unbounded_faces


def test_tropical_line_face_classes(tropical_line):
    faces = polycomplex_service.classify_faces(tropical_line)
    assert len(faces.far_faces) == 3
    assert len(faces.bounded_faces) == 1
    assert len(faces.unbounded_faces) == 3
    assert polycomplex_service.f_vector(tropical_line) == [1, 3]
    assert polycomplex_service.bounded_f_vector(tropical_line) == [1, 0]


def test_span_basis(cube3, tropical_line):
    square = cube3.cells_of_dim(2)[0]
    assert polycomplex_service.span_basis(cube3, square).cols == 2
    vertex = cube3.cells_of_dim(0)[0]
    assert polycomplex_service.span_basis(cube3, vertex).shape == (3, 0)
    edge = tropical_line.cell_id([0, 2])
    assert polycomplex_service.span_basis(tropical_line, edge) == RatMatrix.from_columns([[1, 0]])
    with pytest.raises(FarFace):
        polycomplex_service.span_basis(tropical_line, tropical_line.cell_id([1]))


def test_span_basis_contains_every_cell_direction(cube3):
    for c in cube3.non_far_ids:
        basis = polycomplex_service.span_basis(cube3, c)
        rays = [cube3.rays[r][1:] for r in sorted(cube3.cells[c].rays)]
        differences = [tuple(x - y for x, y in zip(r, rays[0])) for r in rays[1:]]
        if differences:
            exactlin_service.solve_in_span(basis, RatMatrix.from_columns(differences, 3))


def test_orientations_cancel_in_pairs(cube3, tropical_line, k4_fan, conic):
    for pc in (cube3, tropical_line, k4_fan, conic):
        orientation = polycomplex_service.orientations(pc)
        assert orientation.check(pc) == []
        assert set(orientation.signs.values()) <= {-1, 1}
        assert set(orientation.signs) == set(pc.face_relations)


def test_orientation_of_an_interval():
    pc = polycomplex_service.build_complex([(1, 0), (1, 1)], [], [[0, 1]])
    orientation = polycomplex_service.orientations(pc)
    edge = pc.cell_id([0, 1])
    assert orientation(pc.cell_id([0]), edge) == -orientation(pc.cell_id([1]), edge)
    assert orientation(pc.cell_id([0]), pc.cell_id([1])) == 0


def test_flipped_orientations_keep_betti_numbers(cube3):
    rng = random.Random(1)
    expected = chain_service.betti_table(cube3, SheafKind.W, Variant.COCHAIN)
    for _ in range(3):
        flips = frozenset(c for c in cube3.non_far_ids if rng.random() < 0.5)
        orientation = polycomplex_service.orientations(cube3, flips)
        assert orientation.check(cube3) == []
        assert chain_service.betti_table(cube3, SheafKind.W, Variant.COCHAIN, orientation) == expected


@pytest.mark.parametrize("rays, lineality, cells", [
    ([(1, 0), (1, 0)], [], [[0], [1]]),
    ([(1, 0), (1, 1)], [], [[0, 5]]),
    ([(1, 0), (1, 1)], [], [[0, 1], [0, 1]]),
    ([(1, 0), (1, 1)], [], [[0, 1], [0]]),
    ([(1, 0), (1, 1), (1, 2)], [], [[0, 1, 2]]),
    # a square and a triangle meeting in its diagonal
    ([(1, 0, 0), (1, 1, 0), (1, 1, 1), (1, 0, 1), (1, 2, -1)], [], [[0, 1, 2, 3], [0, 2, 4]]),
    ([(-1, 0)], [], [[0]]),
    ([(1, 0)], [(1, 1)], [[0]]),
])
def test_build_complex_rejects_bad_input(rays, lineality, cells):
    with pytest.raises(NotAComplex):
        polycomplex_service.build_complex(rays, lineality, cells)


def test_crossing_segments_are_not_a_complex():
    # the diagonals of the unit square share no vertex but cross at (1/2, 1/2)
    with pytest.raises(NotAComplex, match="overlap"):
        polycomplex_service.build_complex([(1, 0, 0), (1, 1, 1), (1, 0, 1), (1, 1, 0)], [], [[0, 1], [2, 3]])


def test_collinear_overlapping_half_lines_are_not_a_complex():
    # y = 0 from x = 0 and from x = 1, both towards +x
    with pytest.raises(NotAComplex):
        polycomplex_service.build_complex([(1, 0, 0), (1, 1, 0), (0, 1, 0)], [], [[0, 2], [1, 2]])


def test_parallel_half_lines_sharing_a_far_ray():
    pc = polycomplex_service.build_complex([(1, 0, 0), (1, 0, 1), (0, 1, 0)], [], [[0, 2], [1, 2]])
    assert polycomplex_service.f_vector(pc) == [2, 2]
    assert polycomplex_service.bounded_f_vector(pc) == [2, 0]


def test_disjoint_segments_form_a_complex():
    pc = polycomplex_service.build_complex([(1, 0, 0), (1, 1, 0), (1, 0, 1), (1, 1, 1)], [], [[0, 1], [2, 3]])
    assert polycomplex_service.f_vector(pc) == [4, 2]


@pytest.mark.parametrize("entry", ["abc", "1/0", "1.5.2"])
def test_non_rational_entries_are_not_a_complex(entry):
    with pytest.raises(NotAComplex, match="not a rational"):
        polycomplex_service.build_complex([("1", entry)], [], [[0]])


def test_lineality_cells_are_never_bounded():
    pc = polycomplex_service.build_complex([(1, 0, 0)], [(0, 0, 1)], [[0]])
    assert pc.lineality == ((0, 0, 1),)
    assert polycomplex_service.bounded_f_vector(pc) == [0, 0]
    assert polycomplex_service.f_vector(pc) == [0, 1]


def test_build_complex_normalizes_rays():
    pc = polycomplex_service.build_complex([(2, 2, 4), (0, 3, 6)], [], [[0, 1]])
    assert pc.rays == ((1, 1, 2), (0, 1, 2))
    assert all(isinstance(x, Fraction) for r in pc.rays for x in r)


def test_single_far_ray_is_all_far():
    pc = polycomplex_service.build_complex([(0, 1)], [], [[0]])
    faces = polycomplex_service.classify_faces(pc)
    assert faces.far_faces == {pc.cell_id([0])}
    assert not faces.bounded_faces
    assert polycomplex_service.f_vector(pc) == [0]
