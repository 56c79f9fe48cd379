"""Dense matrices of exact rationals, with arithmetic delegated to FLINT."""
from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from flint import fmpq, fmpq_mat

RatLike = Union[int, Fraction, str]

ZERO = Fraction(0)
ONE = Fraction(1)


def to_rat(value: RatLike) -> Fraction:
    """Coerce an int, Fraction or "p/q" string to a Fraction"""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, (int, str)):
        return Fraction(value)
    raise TypeError(f"cannot interpret {value!r} as a rational number")


def format_rat(value: Fraction) -> str:
    """Render p/q, or just p for integers"""
    return str(value)


class RatMatrix:
    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Optional[Iterable[Fraction]] = None):
        if rows < 0 or cols < 0:
            raise ValueError(f"invalid shape {rows}x{cols}")
        self.rows = rows
        self.cols = cols
        if entries is None:
            self.entries: Tuple[Fraction, ...] = (ZERO,) * (rows * cols)
        else:
            self.entries = tuple(to_rat(e) for e in entries)
            if len(self.entries) != rows * cols:
                raise ValueError(f"{len(self.entries)} entries do not fill a {rows}x{cols} matrix")

    # Construction

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[RatLike]], cols: Optional[int] = None) -> "RatMatrix":
        if not rows:
            return cls(0, cols or 0)
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise ValueError("ragged rows")
        return cls(len(rows), width, (to_rat(e) for r in rows for e in r))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[RatLike]], rows: Optional[int] = None) -> "RatMatrix":
        if not columns:
            return cls(rows or 0, 0)
        return cls.from_rows(columns).transpose()

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RatMatrix":
        return cls(rows, cols)

    @classmethod
    def identity(cls, n: int) -> "RatMatrix":
        return cls(n, n, (ONE if i == j else ZERO for i in range(n) for j in range(n)))

    @classmethod
    def hstack(cls, blocks: Sequence["RatMatrix"], rows: Optional[int] = None) -> "RatMatrix":
        if not blocks:
            return cls(rows or 0, 0)
        height = blocks[0].rows
        if any(b.rows != height for b in blocks):
            raise ValueError("hstack needs equal row counts")
        out: List[Fraction] = []
        for i in range(height):
            for b in blocks:
                out.extend(b.row(i))
        return cls(height, sum(b.cols for b in blocks), out)

    @classmethod
    def vstack(cls, blocks: Sequence["RatMatrix"], cols: Optional[int] = None) -> "RatMatrix":
        if not blocks:
            return cls(0, cols or 0)
        width = blocks[0].cols
        if any(b.cols != width for b in blocks):
            raise ValueError("vstack needs equal column counts")
        out: List[Fraction] = []
        for b in blocks:
            out.extend(b.entries)
        return cls(sum(b.rows for b in blocks), width, out)

    @classmethod
    def from_blocks(cls, row_sizes: Sequence[int], col_sizes: Sequence[int],
                    blocks: Dict[Tuple[int, int], "RatMatrix"]) -> "RatMatrix":
        """Assemble a block matrix; missing blocks are zero"""
        row_offsets = [0]
        for size in row_sizes:
            row_offsets.append(row_offsets[-1] + size)
        col_offsets = [0]
        for size in col_sizes:
            col_offsets.append(col_offsets[-1] + size)
        n_rows, n_cols = row_offsets[-1], col_offsets[-1]
        out = [ZERO] * (n_rows * n_cols)
        for (bi, bj), block in blocks.items():
            if (block.rows, block.cols) != (row_sizes[bi], col_sizes[bj]):
                raise ValueError(f"block ({bi}, {bj}) has shape {block.shape}, "
                                 f"expected {(row_sizes[bi], col_sizes[bj])}")
            r0, c0 = row_offsets[bi], col_offsets[bj]
            for i in range(block.rows):
                base = (r0 + i) * n_cols + c0
                out[base:base + block.cols] = block.row(i)
        return cls(n_rows, n_cols, out)

    # Access

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, key: Tuple[int, int]) -> Fraction:
        i, j = key
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(f"index {key} out of range for {self.rows}x{self.cols}")
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> Tuple[Fraction, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> Tuple[Fraction, ...]:
        return self.entries[j::self.cols] if self.cols else ()

    def to_rows(self) -> List[Tuple[Fraction, ...]]:
        return [self.row(i) for i in range(self.rows)]

    def to_columns(self) -> List[Tuple[Fraction, ...]]:
        return [self.column(j) for j in range(self.cols)]

    def __iter__(self) -> Iterator[Tuple[Fraction, ...]]:
        return iter(self.to_rows())

    # Arithmetic

    def transpose(self) -> "RatMatrix":
        return RatMatrix(self.cols, self.rows, (self.entries[i * self.cols + j]
                                                for j in range(self.cols) for i in range(self.rows)))

    @property
    def T(self) -> "RatMatrix":
        return self.transpose()

    def __matmul__(self, other: "RatMatrix") -> "RatMatrix":
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        if 0 in (self.rows, self.cols, other.cols):
            return RatMatrix(self.rows, other.cols)
        return RatMatrix.from_flint(self.to_flint() * other.to_flint())

    def __add__(self, other: "RatMatrix") -> "RatMatrix":
        if self.shape != other.shape:
            raise ValueError(f"cannot add {self.shape} and {other.shape}")
        return RatMatrix(self.rows, self.cols, (a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "RatMatrix") -> "RatMatrix":
        return self + (-other)

    def __neg__(self) -> "RatMatrix":
        return self.scale(-1)

    def scale(self, factor: RatLike) -> "RatMatrix":
        k = to_rat(factor)
        return RatMatrix(self.rows, self.cols, (k * e for e in self.entries))

    def select_columns(self, indices: Sequence[int]) -> "RatMatrix":
        return RatMatrix.from_columns([self.column(j) for j in indices], self.rows)

    def select_rows(self, indices: Sequence[int]) -> "RatMatrix":
        return RatMatrix.from_rows([self.row(i) for i in indices], self.cols)

    def is_zero(self) -> bool:
        return not any(self.entries)

    # FLINT bridge

    def to_flint(self) -> fmpq_mat:
        mat = fmpq_mat(self.rows, self.cols)
        for idx, value in enumerate(self.entries):
            if value:
                mat[idx // self.cols, idx % self.cols] = fmpq(value.numerator, value.denominator)
        return mat

    @classmethod
    def from_flint(cls, mat: fmpq_mat) -> "RatMatrix":
        rows, cols = mat.nrows(), mat.ncols()
        out = []
        for i in range(rows):
            for j in range(cols):
                value = mat[i, j]
                out.append(Fraction(int(value.p), int(value.q)))
        return cls(rows, cols, out)

    # Protocol

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RatMatrix):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self) -> str:
        body = "; ".join(" ".join(format_rat(e) for e in self.row(i)) for i in range(self.rows))
        return f"RatMatrix({self.rows}x{self.cols}: [{body}])"

    def to_json(self) -> List[List[str]]:
        return [[format_rat(e) for e in self.row(i)] for i in range(self.rows)]

    @classmethod
    def from_json(cls, data: Sequence[Sequence[RatLike]],
                  shape: Optional[Tuple[int, int]] = None) -> "RatMatrix":
        """Parse nested lists; `shape` resolves the column count of matrices with no rows"""
        if not data:
            rows, cols = shape if shape is not None else (0, 0)
            if rows != 0:
                raise ValueError(f"expected {rows} rows, got none")
            return cls(0, cols)
        mat = cls.from_rows(data)
        if shape is not None and mat.shape != tuple(shape):
            raise ValueError(f"expected shape {tuple(shape)}, got {mat.shape}")
        return mat
