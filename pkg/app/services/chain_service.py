from typing import Dict, List, Optional, Tuple
from loguru import logger

from app.core.errors import InvariantViolation, NotAComplex, WrongDirection
from app.models.chain import ChainComplex, ChainDirection, ChainGroup, Variant
from app.models.polyhedral import OrientationMap, PolyhedralComplex
from app.models.ratmatrix import RatMatrix
from app.models.sheaf import CellSheaf, Direction, SheafKind
from app.services.exactlin_service import exactlin_service
from app.services.polycomplex_service import polycomplex_service
from app.services.sheaf_service import sheaf_service


class ChainService:
    """Cellular (co)chain complexes of a (co)sheaf and their homology"""

    def _groups(self, pc: PolyhedralComplex, s: CellSheaf, bounded_only: bool) -> List[ChainGroup]:
        cells = pc.bounded_ids if bounded_only else pc.non_far_ids
        groups = []
        for q in range(pc.dim + 1):
            ids = tuple(c for c in cells if pc.cells[c].dim == q)
            groups.append(ChainGroup(cells=ids, stalk_dims=tuple(s.stalk_dim(c) for c in ids)))
        return groups

    def _assemble(self, pc: PolyhedralComplex, s: CellSheaf, variant: Variant,
                  orientation: Optional[OrientationMap]) -> ChainComplex:
        expected = Direction.COSHEAF if variant.homological else Direction.SHEAF
        if s.direction is not expected:
            raise WrongDirection(f"the {variant.value} complex needs a {expected.value}, got a {s.direction.value}")
        if orientation is None:
            orientation = polycomplex_service.orientations(pc)
        groups = self._groups(pc, s, variant.bounded_only)
        differentials = []
        for q, source in enumerate(groups):
            target_degree = q - 1 if variant.homological else q + 1
            target = groups[target_degree] if 0 <= target_degree < len(groups) else ChainGroup()
            position = {c: i for i, c in enumerate(target.cells)}
            blocks: Dict[Tuple[int, int], RatMatrix] = {}
            for j, c in enumerate(source.cells):
                for facet in (pc.facets_of[c] if variant.homological else pc.cofaces_of(c)):
                    i = position.get(facet)
                    if i is None:
                        continue
                    if variant.homological:
                        sign = orientation(facet, c)
                        block = s.blocks[(facet, c)]
                    else:
                        sign = orientation(c, facet)
                        block = s.blocks[(c, facet)]
                    if sign:
                        blocks[(i, j)] = block.scale(sign)
            differentials.append(RatMatrix.from_blocks(target.stalk_dims, source.stalk_dims, blocks))
        cc = ChainComplex(
            direction=ChainDirection.CHAIN if variant.homological else ChainDirection.COCHAIN,
            differentials=tuple(differentials),
            groups=tuple(groups),
        )
        logger.debug(f"Assembled {variant.value} complex with group dimensions {cc.dims}")
        return cc

    def usual_chain_complex(self, pc: PolyhedralComplex, cosheaf: CellSheaf,
                            orientation: Optional[OrientationMap] = None) -> ChainComplex:
        """Chains on bounded faces"""
        return self._assemble(pc, cosheaf, Variant.USUAL, orientation)

    def borel_moore_complex(self, pc: PolyhedralComplex, cosheaf: CellSheaf,
                            orientation: Optional[OrientationMap] = None) -> ChainComplex:
        """Chains on all non-far faces"""
        return self._assemble(pc, cosheaf, Variant.BM, orientation)

    def usual_cochain_complex(self, pc: PolyhedralComplex, sheaf: CellSheaf,
                              orientation: Optional[OrientationMap] = None) -> ChainComplex:
        """Cochains on bounded faces"""
        return self._assemble(pc, sheaf, Variant.COCHAIN, orientation)

    def compact_support_complex(self, pc: PolyhedralComplex, sheaf: CellSheaf,
                                orientation: Optional[OrientationMap] = None) -> ChainComplex:
        """Cochains on all non-far faces"""
        return self._assemble(pc, sheaf, Variant.CS, orientation)

    def assemble(self, pc: PolyhedralComplex, s: CellSheaf, variant: Variant,
                 orientation: Optional[OrientationMap] = None) -> ChainComplex:
        """Assemble a variant; raises InvariantViolation unless d o d = 0"""
        cc = self._assemble(pc, s, variant, orientation)
        if not self.is_welldefined(cc):
            logger.error(f"Assembled {variant.value} complex fails d o d = 0")
            raise InvariantViolation(f"the assembled {variant.value} complex is not a complex")
        return cc

    # Homology

    def is_welldefined(self, cc: ChainComplex) -> bool:
        """Every composite of consecutive differentials vanishes"""
        for q in range(cc.top_degree + 1):
            inner, outer = cc.incoming(q), cc.outgoing(q)
            if inner is None or outer is None:
                continue
            if outer.cols != inner.rows:
                return False
            if not (outer @ inner).is_zero():
                return False
        return True

    def _require_welldefined(self, cc: ChainComplex) -> None:
        if not self.is_welldefined(cc):
            raise NotAComplex("the composite of two consecutive differentials is not zero")

    def betti_numbers(self, cc: ChainComplex) -> List[int]:
        """dim C_q - rank(outgoing map) - rank(incoming map), degrees 0..d"""
        self._require_welldefined(cc)
        ranks = [exactlin_service.rank(m) for m in cc.differentials]
        betti = []
        for q, dim in enumerate(cc.dims):
            incoming = q + 1 if cc.direction is ChainDirection.CHAIN else q - 1
            betti.append(dim - ranks[q] - (ranks[incoming] if 0 <= incoming < len(ranks) else 0))
        return betti

    def homology_basis(self, cc: ChainComplex, q: int) -> RatMatrix:
        """Cycles in degree q spanning a complement of the boundaries"""
        self._require_welldefined(cc)
        if not 0 <= q <= cc.top_degree:
            return RatMatrix.zeros(0, 0)
        cycles = exactlin_service.kernel_basis(cc.outgoing(q))
        incoming = cc.incoming(q)
        boundaries = (exactlin_service.column_basis(incoming) if incoming is not None
                      else RatMatrix.zeros(cycles.rows, 0))
        _, pivots, _ = exactlin_service.rref(RatMatrix.hstack([boundaries, cycles]))
        chosen = [p - boundaries.cols for p in pivots if p >= boundaries.cols]
        return cycles.select_columns(chosen)

    def betti_table(self, pc: PolyhedralComplex, kind: SheafKind, variant: Variant,
                    orientation: Optional[OrientationMap] = None) -> List[List[int]]:
        """Betti rows for p = 0..dim(pc), one complex per p"""
        if orientation is None:
            orientation = polycomplex_service.orientations(pc)
        direction = Direction.COSHEAF if variant.homological else Direction.SHEAF
        rows = []
        for p in range(pc.dim + 1):
            s = sheaf_service.build(pc, kind, p, direction)
            rows.append(self.betti_numbers(self.assemble(pc, s, variant, orientation)))
        logger.info(f"Betti table of {kind.value} ({variant.value}): {rows}")
        return rows

    def group_dims(self, cc: ChainComplex) -> List[int]:
        return cc.dims

    def euler_characteristic(self, cc: ChainComplex) -> int:
        return sum((-1) ** q * d for q, d in enumerate(cc.dims))

    def print_complex(self, cc: ChainComplex) -> str:
        """Two lines: degree labels over "k^n" tokens joined by arrows.

        Chains read from degree d+1 down to -1, cochains from -1 up to d+1; the
        out-of-range ends are always k^0. Each label starts one column after
        the beginning of its token.
        """
        if not cc.differentials:
            return "k^0"
        d = cc.top_degree
        if cc.direction is ChainDirection.CHAIN:
            degrees = list(range(d + 1, -2, -1))
        else:
            degrees = list(range(-1, d + 2))
        dims = cc.dims
        tokens = [f"k^{dims[q] if 0 <= q <= d else 0}" for q in degrees]
        header, body = "", ""
        for degree, token in zip(degrees, tokens):
            if body:
                body += " --> "
            start = len(body)
            header = header.ljust(start + 1) + str(degree)
            body += token
        return f"{header.rstrip()}\n{body}"


# Create a singleton instance
chain_service = ChainService()
