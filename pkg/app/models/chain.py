from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Sequence, Tuple

from app.models.ratmatrix import RatMatrix


class ChainDirection(str, Enum):
    CHAIN = "chain"
    COCHAIN = "cochain"


class Variant(str, Enum):
    USUAL = "usual"
    BM = "bm"
    COCHAIN = "cochain"
    CS = "cs"

    @property
    def homological(self) -> bool:
        return self in (Variant.USUAL, Variant.BM)

    @property
    def bounded_only(self) -> bool:
        return self in (Variant.USUAL, Variant.COCHAIN)


@dataclass(frozen=True)
class ChainGroup:
    """Cells of one degree with the offset of each stalk inside the direct sum"""
    cells: Tuple[int, ...] = ()
    stalk_dims: Tuple[int, ...] = ()

    @property
    def offsets(self) -> Tuple[int, ...]:
        out, total = [], 0
        for d in self.stalk_dims:
            out.append(total)
            total += d
        return tuple(out)

    @property
    def dim(self) -> int:
        return sum(self.stalk_dims)


@dataclass(frozen=True)
class ChainComplex:
    """Differentials indexed by source degree 0..d.

    For chains differentials[q] is the boundary C_q -> C_{q-1}; for cochains it
    is the coboundary C^q -> C^{q+1}. Either way its column count is dim C_q,
    and the maps leaving the range (into degree -1 or d+1) have zero rows.
    """
    direction: ChainDirection
    differentials: Tuple[RatMatrix, ...]
    groups: Optional[Tuple[ChainGroup, ...]] = field(default=None, compare=False)

    @property
    def top_degree(self) -> int:
        return len(self.differentials) - 1

    @property
    def dims(self) -> List[int]:
        return [m.cols for m in self.differentials]

    def outgoing(self, q: int) -> Optional[RatMatrix]:
        if 0 <= q < len(self.differentials):
            return self.differentials[q]
        return None

    def incoming(self, q: int) -> Optional[RatMatrix]:
        source = q + 1 if self.direction is ChainDirection.CHAIN else q - 1
        return self.outgoing(source)

    def to_json(self) -> dict:
        return {
            "direction": self.direction.value,
            "dims": self.dims,
            "differentials": [m.to_json() for m in self.differentials],
        }

    @classmethod
    def from_json(cls, data: dict) -> "ChainComplex":
        direction = ChainDirection(data["direction"])
        raw: Sequence = data["differentials"]
        dims: Optional[List[int]] = data.get("dims")
        if dims is None:
            dims = [len(m[0]) if m else None for m in raw]
            for q, d in enumerate(dims):
                if d is None:
                    neighbour = q + 1 if direction is ChainDirection.CHAIN else q - 1
                    dims[q] = len(raw[neighbour]) if 0 <= neighbour < len(raw) else 0
        if len(dims) != len(raw):
            raise ValueError(f"{len(dims)} dims given for {len(raw)} differentials")
        matrices = []
        for q, m in enumerate(raw):
            matrices.append(RatMatrix.from_json(m, (len(m), dims[q])))
        return cls(direction=direction, differentials=tuple(matrices))
