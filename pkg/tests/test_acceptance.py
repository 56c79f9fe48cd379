"""Golden Betti tables and structural identities for the reference complexes."""
import random
from math import comb

import pytest

from app.models.chain import Variant
from app.models.ratmatrix import RatMatrix
from app.models.sheaf import SheafKind
from app.models.tropical import Convention
from app.services.chain_service import chain_service
from app.services.exactlin_service import exactlin_service
from app.services.generator_service import generator_service
from app.services.polycomplex_service import polycomplex_service
from app.services.sheaf_service import sheaf_service


def dual_h_vector(f_vector):
    """h_k = sum_i f_i C(i, k) (-1)^(i - k) for the face numbers of a simple polytope"""
    n = len(f_vector)
    return [sum(f_vector[i] * comb(i, k) * (-1) ** (i - k) for i in range(k, n)) for k in range(n)]


def usual_and_bm(pc):
    return (chain_service.betti_table(pc, SheafKind.F, Variant.USUAL),
            chain_service.betti_table(pc, SheafKind.F, Variant.BM))


def assert_poincare_duality(pc, usual, bm):
    d = pc.dim
    for p in range(d + 1):
        for q in range(d + 1):
            assert usual[p][q] == bm[d - p][d - q]


def test_cube_w_cochains_match_the_dual_h_vector(cube3):
    rows = chain_service.betti_table(cube3, SheafKind.W, Variant.COCHAIN)
    assert rows == [[1, 0, 0, 0], [0, 3, 0, 0], [0, 0, 3, 0], [0, 0, 0, 1]]
    diagonal = [rows[p][p] for p in range(4)]
    assert diagonal == dual_h_vector(polycomplex_service.f_vector(cube3)) == [1, 3, 3, 1]


def test_tropical_line(tropical_line):
    usual, bm = usual_and_bm(tropical_line)
    assert usual == [[1, 0], [2, 0]]
    assert bm == [[0, 2], [0, 1]]
    assert_poincare_duality(tropical_line, usual, bm)


def test_k4_bergman_fan(k4_fan):
    usual, bm = usual_and_bm(k4_fan)
    assert usual == [[1, 0, 0], [5, 0, 0], [6, 0, 0]]
    assert bm == [[0, 0, 6], [0, 0, 5], [0, 0, 1]]
    assert_poincare_duality(k4_fan, usual, bm)


def test_u36_bergman_fan(u36_fan):
    usual, bm = usual_and_bm(u36_fan)
    assert usual == [[1, 0, 0], [5, 0, 0], [10, 0, 0]]
    assert bm == [[0, 0, 10], [0, 0, 5], [0, 0, 1]]
    assert_poincare_duality(u36_fan, usual, bm)


def test_tropical_conic(conic):
    usual, bm = usual_and_bm(conic)
    assert usual == [[1, 0], [3, 0]]
    assert bm == [[0, 3], [0, 1]]
    assert_poincare_duality(conic, usual, bm)


def test_tropical_k3_surface(k3_surface):
    assert polycomplex_service.bounded_f_vector(k3_surface) == [64, 96, 34]
    usual, bm = usual_and_bm(k3_surface)
    assert usual == [[1, 0, 1], [3, 31, 0], [34, 0, 0]]
    assert bm == [[0, 0, 34], [0, 31, 3], [1, 0, 1]]
    assert_poincare_duality(k3_surface, usual, bm)
    cc = chain_service.usual_chain_complex(k3_surface, sheaf_service.fcosheaf(k3_surface, 0))
    assert chain_service.print_complex(cc) == (
        " 3       2        1        0        -1\n"
        "k^0 --> k^34 --> k^96 --> k^64 --> k^0"
    )


@pytest.mark.parametrize("fan", ["tropical_line", "k4_fan", "u36_fan"])
def test_w_cohomology_vanishing_on_bergman_fans(fan, request):
    pc = request.getfixturevalue(fan)
    d = pc.dim
    usual = chain_service.betti_table(pc, SheafKind.W, Variant.COCHAIN)
    compact = chain_service.betti_table(pc, SheafKind.W, Variant.CS)
    for p in range(d + 1):
        for q in range(d + 1):
            if p != q:
                assert usual[p][q] == 0
            if q != d:
                assert compact[p][q] == 0


@pytest.mark.parametrize("fan", ["tropical_line", "k4_fan", "u36_fan"])
def test_w_euler_characteristics_on_bergman_fans(fan, request):
    pc = request.getfixturevalue(fan)
    bounded = polycomplex_service.bounded_f_vector(pc)
    f_vector = polycomplex_service.f_vector(pc)
    for p in range(pc.dim + 1):
        w = sheaf_service.wsheaf(pc, p)
        usual = chain_service.usual_cochain_complex(pc, w)
        compact = chain_service.compact_support_complex(pc, w)
        expected_usual = sum((-1) ** q * comb(q, p) * bounded[q] for q in range(pc.dim + 1))
        expected_compact = sum((-1) ** q * comb(q, p) * f_vector[q] for q in range(pc.dim + 1))
        assert chain_service.euler_characteristic(usual) == expected_usual
        assert chain_service.euler_characteristic(compact) == expected_compact
        assert sum((-1) ** q * b for q, b in enumerate(chain_service.betti_numbers(usual))) == expected_usual


@pytest.mark.parametrize("name", ["cube3", "conic"])
def test_betti_tables_survive_reorientation(name, request):
    pc = request.getfixturevalue(name)
    rng = random.Random(name)
    kind, variants = (SheafKind.W, (Variant.COCHAIN, Variant.CS)) if name == "cube3" else \
        (SheafKind.F, (Variant.USUAL, Variant.BM))
    expected = {v: chain_service.betti_table(pc, kind, v) for v in variants}
    for _ in range(10):
        flips = frozenset(c for c in range(len(pc.cells)) if pc.cells[c].rays and rng.random() < 0.5)
        orientation = polycomplex_service.orientations(pc, flips)
        for v in variants:
            assert chain_service.betti_table(pc, kind, v, orientation) == expected[v]


@pytest.mark.parametrize("matroid", [
    generator_service.uniform_matroid(2, 3),
    generator_service.graphic_matroid(generator_service.complete_graph(4)),
])
def test_min_and_max_bergman_fans_share_betti_tables(matroid):
    fans = [generator_service.bergman_fan(matroid, c) for c in (Convention.MAX, Convention.MIN)]
    for kind, variant in ((SheafKind.F, Variant.USUAL), (SheafKind.F, Variant.BM),
                          (SheafKind.W, Variant.COCHAIN), (SheafKind.W, Variant.CS)):
        tables = [chain_service.betti_table(pc, kind, variant) for pc in fans]
        assert tables[0] == tables[1]


def test_constant_sheaf_sanity(cube3, tropical_line):
    cube = chain_service.usual_cochain_complex(cube3, sheaf_service.constant_sheaf(cube3))
    assert chain_service.betti_numbers(cube) == [1, 0, 0, 0]
    line = chain_service.usual_cochain_complex(tropical_line, sheaf_service.constant_sheaf(tropical_line))
    assert chain_service.betti_numbers(line) == [1, 0]


def test_compound_matrices_compose():
    rng = random.Random(41)
    for _ in range(100):
        a = RatMatrix(3, 4, (rng.randint(-3, 3) for _ in range(12)))
        b = RatMatrix(4, 3, (rng.randint(-3, 3) for _ in range(12)))
        p = rng.randint(1, 3)
        assert exactlin_service.compound_matrix(a @ b, p) == \
            exactlin_service.compound_matrix(a, p) @ exactlin_service.compound_matrix(b, p)
