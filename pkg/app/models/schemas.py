from pydantic import BaseModel, Field
from typing import Dict, List, Optional, Union
from enum import Enum

from app.models.chain import ChainComplex, ChainDirection, Variant
from app.models.matroid import Matroid
from app.models.polyhedral import PolyhedralComplex
from app.models.ratmatrix import RatMatrix, format_rat
from app.models.sheaf import CellSheaf, Direction, SheafKind, SheafViolation
from app.models.tropical import Convention

RatValue = Union[int, str]
MatrixPayload = List[List[RatValue]]


class GeneratorKind(str, Enum):
    CUBE = "cube"
    BERGMAN = "bergman"
    HYPERSURFACE = "hypersurface"


class ComplexPayload(BaseModel):
    ambient_dim: int = Field(..., ge=0, description="Dimension n of the ambient space Q^n")
    rays: MatrixPayload = Field(..., description="Homogenized rays; leading coordinate 1 for vertices, 0 for far rays")
    lineality: MatrixPayload = Field(default_factory=list, description="Homogenized lineality generators, leading coordinate 0")
    maximal_cells: List[List[int]] = Field(..., description="Ray indices of every maximal cell")

    @classmethod
    def from_complex(cls, pc: PolyhedralComplex) -> "ComplexPayload":
        return cls(
            ambient_dim=pc.ambient_dim,
            rays=[[format_rat(x) for x in r] for r in pc.rays],
            lineality=[[format_rat(x) for x in l] for l in pc.lineality],
            maximal_cells=[sorted(c) for c in pc.maximal_cells],
        )

    def to_complex(self) -> PolyhedralComplex:
        from app.services.polycomplex_service import polycomplex_service
        return polycomplex_service.build_complex(
            self.rays, self.lineality, self.maximal_cells, ambient_dim=self.ambient_dim)


class MatroidPayload(BaseModel):
    n: int = Field(..., ge=0, description="Size of the ground set {0..n-1}")
    bases: List[List[int]] = Field(..., description="Every basis as a list of element indices")

    @classmethod
    def from_matroid(cls, m: Matroid) -> "MatroidPayload":
        return cls(**m.to_json())

    def to_matroid(self) -> Matroid:
        from app.services.generator_service import generator_service
        return generator_service.matroid(self.n, self.bases)


class SheafPayload(BaseModel):
    direction: Direction = Field(..., description="sheaf or cosheaf")
    ambient_wedge_dim: int = Field(..., ge=0, description="Row count of every stalk basis")
    bases: Dict[str, MatrixPayload] = Field(..., description="Stalk basis per cell id, as columns")
    blocks: Dict[str, MatrixPayload] = Field(..., description="Block per \"tau_id,sigma_id\" face pair")

    @classmethod
    def from_sheaf(cls, s: CellSheaf) -> "SheafPayload":
        return cls(**s.to_json())

    def to_sheaf(self) -> CellSheaf:
        bases = {}
        for key, data in self.bases.items():
            bases[int(key)] = (RatMatrix.from_json(data) if data
                               else RatMatrix.zeros(self.ambient_wedge_dim, 0))
        sheaf = CellSheaf(self.direction, self.ambient_wedge_dim, bases, {})
        for key, data in self.blocks.items():
            tau, sigma = (int(part) for part in key.split(","))
            _, cols = sheaf.expected_block_shape(tau, sigma)
            sheaf.blocks[(tau, sigma)] = (RatMatrix.from_json(data) if data
                                          else RatMatrix.zeros(0, cols))
        return sheaf


class ChainComplexPayload(BaseModel):
    direction: ChainDirection = Field(..., description="chain or cochain")
    differentials: List[MatrixPayload] = Field(..., description="Differential leaving each degree 0..d")
    dims: Optional[List[int]] = Field(None, description="Group dimension per degree; resolves maps with no rows")

    @classmethod
    def from_chain_complex(cls, cc: ChainComplex) -> "ChainComplexPayload":
        return cls(**cc.to_json())

    def to_chain_complex(self) -> ChainComplex:
        return ChainComplex.from_json(self.model_dump())


class BettiTablePayload(BaseModel):
    sheaf: Optional[SheafKind] = Field(None, description="Sheaf construction; null for a hand-built sheaf")
    variant: Variant = Field(..., description="usual, bm, cochain or cs")
    p_values: List[int] = Field(..., description="Wedge degree of every row; empty for a hand-built sheaf")
    rows: List[List[int]] = Field(..., description="Betti numbers per row, degrees 0..d")


class HomologyPayload(BaseModel):
    direction: ChainDirection
    dims: List[int] = Field(..., description="Group dimension per degree")
    betti: List[int] = Field(..., description="Betti number per degree")
    euler_characteristic: int
    text: str = Field(..., description="The k^n arrow rendering")


class InfoPayload(BaseModel):
    ambient_dim: int
    dim: int = Field(..., description="Dimension of the complex")
    n_rays: int
    lineality_dim: int
    f_vector: List[int] = Field(..., description="Non-far cells per dimension")
    bounded_f_vector: List[int] = Field(..., description="Bounded cells per dimension")
    far_faces: int
    bounded_faces: int
    unbounded_faces: int


class ViolationPayload(BaseModel):
    sheaf: str = Field(..., description="Which constructor produced the offending sheaf")
    kind: str
    cells: List[int]
    message: str

    @classmethod
    def from_violation(cls, sheaf: str, v: SheafViolation) -> "ViolationPayload":
        return cls(sheaf=sheaf, kind=v.kind, cells=list(v.cells), message=v.message)


class ValidationReportPayload(BaseModel):
    ok: bool
    sheaves_checked: int
    complexes_checked: int
    orientation_failures: List[List[int]] = Field(default_factory=list, description="(gamma, sigma) pairs whose signed sums do not vanish")
    sheaf_violations: List[ViolationPayload] = Field(default_factory=list)
    ill_defined_complexes: List[str] = Field(default_factory=list, description="Complexes with a non-zero d o d")


class GenerateRequest(BaseModel):
    kind: GeneratorKind = Field(..., description="cube, bergman or hypersurface")
    d: Optional[int] = Field(None, ge=0, description="Cube dimension")
    uniform: Optional[List[int]] = Field(None, min_length=2, max_length=2, description="Rank and size of a uniform matroid")
    graph: Optional[str] = Field(None, description="Graph descriptor such as complete:4")
    matroid: Optional[MatroidPayload] = Field(None, description="Matroid given by its bases")
    convention: Convention = Field(Convention.MAX, description="max or min")
    polynomial: Optional[str] = Field(None, description="Tropical polynomial such as max(0,x,y)")
    variables: Optional[List[str]] = Field(None, description="Explicit variable order")


class BettiRequest(BaseModel):
    complex: ComplexPayload
    sheaf: Optional[SheafKind] = Field(None, description="constant, w or f")
    sheaf_data: Optional[SheafPayload] = Field(None, description="Hand-built sheaf used instead of a construction")
    variant: Variant = Field(..., description="usual, bm, cochain or cs")
    p: int = Field(0, ge=0, description="Wedge degree")
    all_p: bool = Field(False, description="Return rows for every p in 0..d")


class PrintResponse(BaseModel):
    text: str
