from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Tuple

from app.models.ratmatrix import RatMatrix


class Direction(str, Enum):
    SHEAF = "sheaf"
    COSHEAF = "cosheaf"

    def flipped(self) -> "Direction":
        return Direction.COSHEAF if self is Direction.SHEAF else Direction.SHEAF


@dataclass(frozen=True)
class CellSheaf:
    """Stalk bases per non-far cell and one block per face pair (tau, sigma), tau < sigma.

    A sheaf block maps the tau stalk into the sigma stalk (dim sigma x dim tau);
    a cosheaf block maps the sigma stalk into the tau stalk (dim tau x dim sigma).
    Bases are stored as columns in ambient coordinates of size ambient_wedge_dim.
    """
    direction: Direction
    ambient_wedge_dim: int
    bases: Dict[int, RatMatrix] = field(hash=False)
    blocks: Dict[Tuple[int, int], RatMatrix] = field(hash=False)

    def stalk_dim(self, cell_id: int) -> int:
        basis = self.bases.get(cell_id)
        return basis.cols if basis is not None else 0

    def expected_block_shape(self, tau: int, sigma: int) -> Tuple[int, int]:
        if self.direction is Direction.SHEAF:
            return (self.stalk_dim(sigma), self.stalk_dim(tau))
        return (self.stalk_dim(tau), self.stalk_dim(sigma))

    def to_json(self) -> dict:
        return {
            "direction": self.direction.value,
            "ambient_wedge_dim": self.ambient_wedge_dim,
            "bases": {str(c): b.to_json() for c, b in sorted(self.bases.items())},
            "blocks": {f"{t},{s}": b.to_json() for (t, s), b in sorted(self.blocks.items())},
        }


@dataclass(frozen=True)
class SheafViolation:
    kind: str
    cells: Tuple[int, ...]
    message: str


class SheafKind(str, Enum):
    CONSTANT = "constant"
    W = "w"
    F = "f"
