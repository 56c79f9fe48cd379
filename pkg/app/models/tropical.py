from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Dict, List, NamedTuple, Sequence, Tuple

from app.models.ratmatrix import to_rat


class Convention(str, Enum):
    MAX = "max"
    MIN = "min"

    def better(self, a: Fraction, b: Fraction) -> bool:
        """True when `a` strictly beats `b` under this convention"""
        return a > b if self is Convention.MAX else a < b

    def optimum(self, values: Sequence[Fraction]) -> Fraction:
        return max(values) if self is Convention.MAX else min(values)


class Term(NamedTuple):
    exponents: Tuple[int, ...]
    coefficient: Fraction


@dataclass(frozen=True)
class TropicalPolynomial:
    """c_1 + a_1.x (+) ... (+) c_k + a_k.x with (+) = max or min"""
    convention: Convention
    variables: Tuple[str, ...]
    terms: Tuple[Term, ...]

    @property
    def n_variables(self) -> int:
        return len(self.variables)

    @classmethod
    def merged(cls, convention: Convention, variables: Sequence[str],
               terms: Sequence[Term]) -> "TropicalPolynomial":
        """Collapse terms with equal exponents to the dominant coefficient, keeping first-appearance order"""
        best: Dict[Tuple[int, ...], Fraction] = {}
        for exponents, coefficient in terms:
            coefficient = to_rat(coefficient)
            current = best.get(exponents)
            if current is None or convention.better(coefficient, current):
                best[exponents] = coefficient
        return cls(
            convention=convention,
            variables=tuple(variables),
            terms=tuple(Term(e, c) for e, c in best.items()),
        )

    def term_values(self, point: Sequence) -> List[Fraction]:
        x = [to_rat(v) for v in point]
        if len(x) != self.n_variables:
            raise ValueError(f"expected {self.n_variables} coordinates, got {len(x)}")
        return [t.coefficient + sum(a * v for a, v in zip(t.exponents, x)) for t in self.terms]

    def evaluate(self, point: Sequence) -> Fraction:
        return self.convention.optimum(self.term_values(point))

    def optimal_terms(self, point: Sequence) -> Tuple[int, ...]:
        """Indices of the terms attaining the optimum at `point`"""
        values = self.term_values(point)
        best = self.convention.optimum(values)
        return tuple(i for i, v in enumerate(values) if v == best)
