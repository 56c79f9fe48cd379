from typing import List, Optional
from loguru import logger

from app.core.errors import InvariantViolation, PipelineError
from app.models.chain import ChainComplex, Variant
from app.models.polyhedral import PolyhedralComplex
from app.models.schemas import (
    BettiTablePayload, ChainComplexPayload, GenerateRequest, GeneratorKind, HomologyPayload,
    InfoPayload, SheafPayload, ValidationReportPayload, ViolationPayload,
)
from app.models.sheaf import CellSheaf, Direction, SheafKind
from app.services.chain_service import chain_service
from app.services.generator_service import generator_service
from app.services.polycomplex_service import polycomplex_service
from app.services.sheaf_service import sheaf_service
from app.services.tropical_service import tropical_service


class PipelineService:
    """Generator -> sheaf -> chain complex pipelines shared by the CLI and the HTTP routes"""

    def generate(self, request: GenerateRequest) -> PolyhedralComplex:
        logger.info(f"Generating a {request.kind.value} complex")
        if request.kind is GeneratorKind.CUBE:
            if request.d is None:
                raise PipelineError("cube generation needs a dimension d")
            return generator_service.cube_complex(request.d)
        if request.kind is GeneratorKind.HYPERSURFACE:
            if not request.polynomial:
                raise PipelineError("hypersurface generation needs a polynomial")
            f = tropical_service.parse(request.polynomial, request.variables)
            return tropical_service.tropical_hypersurface(f)

        sources = [request.uniform is not None, request.graph is not None, request.matroid is not None]
        if sum(sources) != 1:
            raise PipelineError("bergman generation needs exactly one of uniform, graph or matroid")
        if request.uniform is not None:
            r, n = request.uniform
            matroid = generator_service.uniform_matroid(r, n)
        elif request.graph is not None:
            family, _, size = request.graph.partition(":")
            if family != "complete" or not size.isdigit():
                raise PipelineError(f"unknown graph descriptor {request.graph!r}; expected complete:K")
            matroid = generator_service.graphic_matroid(generator_service.complete_graph(int(size)))
        else:
            matroid = request.matroid.to_matroid()
        return generator_service.bergman_fan(matroid, request.convention)

    def load_sheaf(self, pc: PolyhedralComplex, payload: SheafPayload) -> CellSheaf:
        """A hand-built sheaf, checked for functoriality on pc"""
        try:
            s = payload.to_sheaf()
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as e:
            raise PipelineError(f"invalid sheaf JSON: {e}") from e
        violations = sheaf_service.validate(s, pc)
        if violations:
            details = "; ".join(v.message for v in violations[:5])
            raise PipelineError(f"the sheaf does not fit this complex ({len(violations)} violations): {details}")
        logger.info(f"Loaded a hand-built {s.direction.value} with {len(s.bases)} stalks")
        return s

    def load_chain_complex(self, payload: ChainComplexPayload) -> ChainComplex:
        try:
            return payload.to_chain_complex()
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as e:
            raise PipelineError(f"invalid chain complex JSON: {e}") from e

    def chain_complex(self, pc: PolyhedralComplex, kind: Optional[SheafKind], p: int,
                      variant: Variant, sheaf: Optional[CellSheaf] = None) -> ChainComplex:
        if sheaf is None:
            if kind is None:
                raise PipelineError("name a sheaf construction or supply a sheaf")
            direction = Direction.COSHEAF if variant.homological else Direction.SHEAF
            sheaf = sheaf_service.build(pc, kind, p, direction)
        return chain_service.assemble(pc, sheaf, variant)

    def betti(self, pc: PolyhedralComplex, kind: Optional[SheafKind], variant: Variant,
              p: Optional[int] = 0, all_p: bool = False,
              sheaf: Optional[CellSheaf] = None) -> BettiTablePayload:
        if all_p:
            if sheaf is not None:
                raise PipelineError("a hand-built sheaf has no wedge degree; drop all-p")
            if kind is None or kind is SheafKind.CONSTANT:
                raise PipelineError("all-p tables need the w or f construction")
            rows = chain_service.betti_table(pc, kind, variant)
            p_values = list(range(len(rows)))
        else:
            rows = [chain_service.betti_numbers(self.chain_complex(pc, kind, p or 0, variant, sheaf))]
            p_values = [] if sheaf is not None else [p or 0]
        return BettiTablePayload(sheaf=None if sheaf is not None else kind, variant=variant,
                                 p_values=p_values, rows=rows)

    def print_complex(self, pc: PolyhedralComplex, kind: Optional[SheafKind], p: int, variant: Variant,
                      sheaf: Optional[CellSheaf] = None) -> str:
        return chain_service.print_complex(self.chain_complex(pc, kind, p, variant, sheaf))

    def homology(self, cc: ChainComplex) -> HomologyPayload:
        """Betti numbers and the arrow rendering of an imported chain complex"""
        betti = chain_service.betti_numbers(cc)
        logger.info(f"Homology of a {cc.direction.value} complex with dimensions {cc.dims}: {betti}")
        return HomologyPayload(
            direction=cc.direction,
            dims=chain_service.group_dims(cc),
            betti=betti,
            euler_characteristic=chain_service.euler_characteristic(cc),
            text=chain_service.print_complex(cc),
        )

    def info(self, pc: PolyhedralComplex) -> InfoPayload:
        faces = polycomplex_service.classify_faces(pc)
        return InfoPayload(
            ambient_dim=pc.ambient_dim,
            dim=pc.dim,
            n_rays=len(pc.rays),
            lineality_dim=len(pc.lineality),
            f_vector=polycomplex_service.f_vector(pc),
            bounded_f_vector=polycomplex_service.bounded_f_vector(pc),
            far_faces=len(faces.far_faces),
            bounded_faces=len(faces.bounded_faces),
            unbounded_faces=len(faces.unbounded_faces),
        )

    def validate(self, pc: PolyhedralComplex) -> ValidationReportPayload:
        """Functoriality of every constructor and d o d = 0 for every compatible variant"""
        orientation = polycomplex_service.orientations(pc)
        orientation_failures = [list(pair) for pair in orientation.check(pc)]
        constructions = [("constant sheaf", sheaf_service.constant_sheaf(pc)),
                         ("constant cosheaf", sheaf_service.constant_cosheaf(pc))]
        for p in range(pc.dim + 1):
            constructions.append((f"W^{p}", sheaf_service.wsheaf(pc, p)))
            constructions.append((f"F_{p}", sheaf_service.fcosheaf(pc, p)))

        violations: List[ViolationPayload] = []
        ill_defined: List[str] = []
        checked = 0
        for name, s in constructions:
            found = sheaf_service.validate(s, pc)
            violations.extend(ViolationPayload.from_violation(name, v) for v in found)
            if found:
                continue
            variants = (Variant.USUAL, Variant.BM) if s.direction is Direction.COSHEAF else (Variant.COCHAIN, Variant.CS)
            for variant in variants:
                checked += 1
                try:
                    chain_service.assemble(pc, s, variant, orientation)
                except InvariantViolation:
                    ill_defined.append(f"{name} ({variant.value})")
        ok = not (orientation_failures or violations or ill_defined)
        logger.info(f"Validation {'passed' if ok else 'failed'}: {len(constructions)} sheaves, {checked} complexes")
        return ValidationReportPayload(
            ok=ok,
            sheaves_checked=len(constructions),
            complexes_checked=checked,
            orientation_failures=orientation_failures,
            sheaf_violations=violations,
            ill_defined_complexes=ill_defined,
        )


# Create a singleton instance
pipeline_service = PipelineService()
