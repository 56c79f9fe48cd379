from math import comb
from typing import Dict, List, Tuple
from loguru import logger

from app.core.errors import PipelineError
from app.models.polyhedral import PolyhedralComplex
from app.models.ratmatrix import RatMatrix
from app.models.sheaf import CellSheaf, Direction, SheafKind, SheafViolation
from app.services.exactlin_service import exactlin_service
from app.services.polycomplex_service import polycomplex_service


class SheafService:
    """Constructors, dualization and validation of cellular (co)sheaves"""

    def _non_far_pairs(self, pc: PolyhedralComplex) -> List[Tuple[int, int]]:
        non_far = set(pc.non_far_ids)
        return [(t, s) for t, s in pc.face_pairs if t in non_far and s in non_far]

    def _constant(self, pc: PolyhedralComplex, direction: Direction) -> CellSheaf:
        one = RatMatrix.identity(1)
        return CellSheaf(
            direction=direction,
            ambient_wedge_dim=1,
            bases={c: one for c in pc.non_far_ids},
            blocks={pair: one for pair in self._non_far_pairs(pc)},
        )

    def constant_sheaf(self, pc: PolyhedralComplex) -> CellSheaf:
        return self._constant(pc, Direction.SHEAF)

    def constant_cosheaf(self, pc: PolyhedralComplex) -> CellSheaf:
        return self._constant(pc, Direction.COSHEAF)

    def _wedge_spans(self, pc: PolyhedralComplex, p: int) -> Dict[int, RatMatrix]:
        """compound(span_basis(sigma), p) for every non-far cell"""
        if p < 0:
            raise PipelineError(f"wedge degree must be non-negative, got {p}")
        return {
            c: exactlin_service.compound_matrix(polycomplex_service.span_basis(pc, c), p)
            for c in pc.non_far_ids
        }

    def wsheaf(self, pc: PolyhedralComplex, p: int) -> CellSheaf:
        """W^p: stalk wedge^p L(sigma), maps are wedge powers of the inclusions"""
        bases = {c: exactlin_service.column_basis(m) for c, m in self._wedge_spans(pc, p).items()}
        blocks = {
            (t, s): exactlin_service.solve_in_span(bases[s], bases[t])
            for t, s in self._non_far_pairs(pc)
        }
        logger.debug(f"W^{p} sheaf: {len(bases)} stalks, total dimension "
                     f"{sum(b.cols for b in bases.values())}")
        return CellSheaf(Direction.SHEAF, comb(pc.ambient_dim, p), bases, blocks)

    def fcosheaf(self, pc: PolyhedralComplex, p: int) -> CellSheaf:
        """F_p: stalk at sigma is the sum of wedge^p L(gamma) over non-far gamma containing sigma"""
        spans = self._wedge_spans(pc, p)
        size = comb(pc.ambient_dim, p)
        bases = {}
        for c in pc.non_far_ids:
            pieces = [spans[c]] + [spans[g] for g in pc.cofaces_of(c) if g in spans]
            bases[c] = exactlin_service.column_basis(RatMatrix.hstack(pieces, size))
        blocks = {
            (t, s): exactlin_service.solve_in_span(bases[t], bases[s])
            for t, s in self._non_far_pairs(pc)
        }
        logger.debug(f"F_{p} cosheaf: {len(bases)} stalks, total dimension "
                     f"{sum(b.cols for b in bases.values())}")
        return CellSheaf(Direction.COSHEAF, size, bases, blocks)

    def dualize(self, s: CellSheaf) -> CellSheaf:
        """Dual vector spaces: direction flips and every block is transposed"""
        return CellSheaf(
            direction=s.direction.flipped(),
            ambient_wedge_dim=s.ambient_wedge_dim,
            bases=dict(s.bases),
            blocks={pair: block.transpose() for pair, block in s.blocks.items()},
        )

    def build(self, pc: PolyhedralComplex, kind: SheafKind, p: int, direction: Direction) -> CellSheaf:
        """Constant, W^p or F_p in the requested direction"""
        if kind is SheafKind.CONSTANT:
            return self._constant(pc, direction)
        if kind is SheafKind.W and direction is Direction.SHEAF:
            return self.wsheaf(pc, p)
        if kind is SheafKind.F and direction is Direction.COSHEAF:
            return self.fcosheaf(pc, p)
        raise PipelineError(f"the {kind.value} construction does not produce a {direction.value}")

    def validate(self, s: CellSheaf, pc: PolyhedralComplex) -> List[SheafViolation]:
        """Stalk, block shape and composition checks; an empty list means valid"""
        violations: List[SheafViolation] = []
        non_far = set(pc.non_far_ids)
        for c in range(len(pc.cells)):
            if c in non_far and c not in s.bases:
                violations.append(SheafViolation("missing_stalk", (c,), f"no stalk at cell {c}"))
            elif c not in non_far and c in s.bases:
                violations.append(SheafViolation("far_stalk", (c,), f"cell {c} is far or empty but has a stalk"))
        for c in sorted(s.bases):
            if not 0 <= c < len(pc.cells):
                violations.append(SheafViolation("unknown_cell", (c,), f"stalk given for cell {c}, which the complex lacks"))
        for c, basis in sorted(s.bases.items()):
            if basis.rows != s.ambient_wedge_dim:
                violations.append(SheafViolation(
                    "basis_shape", (c,),
                    f"basis of cell {c} has {basis.rows} rows, expected {s.ambient_wedge_dim}"))

        well_shaped = set()
        for t, sg in self._non_far_pairs(pc):
            block = s.blocks.get((t, sg))
            if block is None:
                violations.append(SheafViolation("missing_block", (t, sg), f"no block for pair ({t}, {sg})"))
                continue
            expected = s.expected_block_shape(t, sg)
            if block.shape != expected:
                violations.append(SheafViolation(
                    "block_shape", (t, sg), f"block ({t}, {sg}) has shape {block.shape}, expected {expected}"))
                continue
            well_shaped.add((t, sg))

        for sigma in pc.non_far_ids:
            for tau in pc.faces_of(sigma):
                for gamma in pc.faces_of(tau):
                    triple = ((gamma, tau), (tau, sigma), (gamma, sigma))
                    if not all(pair in well_shaped for pair in triple):
                        continue
                    if s.direction is Direction.SHEAF:
                        composite = s.blocks[(tau, sigma)] @ s.blocks[(gamma, tau)]
                    else:
                        composite = s.blocks[(gamma, tau)] @ s.blocks[(tau, sigma)]
                    if composite != s.blocks[(gamma, sigma)]:
                        violations.append(SheafViolation(
                            "composition", (gamma, tau, sigma),
                            f"maps along {gamma} < {tau} < {sigma} do not commute"))
        if violations:
            logger.warning(f"Sheaf validation found {len(violations)} violations")
        return violations


# Create a singleton instance
sheaf_service = SheafService()
