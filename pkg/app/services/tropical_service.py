import re
from fractions import Fraction
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple
from loguru import logger

from app.core.config import settings
from app.core.errors import DegenerateInput, ParseError
from app.models.polyhedral import HRep, PolyhedralComplex
from app.models.ratmatrix import RatMatrix, format_rat
from app.models.tropical import Convention, Term, TropicalPolynomial
from app.services.exactlin_service import exactlin_service
from app.services.polycomplex_service import polycomplex_service

_TOKEN = re.compile(r"(?P<int>\d+)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/(),])")


class Token(NamedTuple):
    kind: str
    text: str
    position: int


def tokenize(src: str) -> List[Token]:
    tokens = []
    pos = 0
    while pos < len(src):
        if src[pos].isspace():
            pos += 1
            continue
        match = _TOKEN.match(src, pos)
        if match is None:
            raise ParseError(pos, "a number, a variable or one of + - * / ( ) ,", src[pos])
        tokens.append(Token(match.lastgroup, match.group(), pos))
        pos = match.end()
    return tokens


class _Parser:
    """Recursive descent over the token list; see the grammar in README.md"""

    def __init__(self, src: str):
        self.src = src
        self.tokens = tokenize(src)
        self.index = 0
        self.appearance: List[str] = []
        self.positions: Dict[str, int] = {}

    def peek(self) -> Optional[Token]:
        return self.tokens[self.index] if self.index < len(self.tokens) else None

    def fail(self, expected: str):
        token = self.peek()
        if token is None:
            raise ParseError(len(self.src), expected)
        raise ParseError(token.position, expected, token.text)

    def take(self, text: str) -> Token:
        token = self.peek()
        if token is None or token.text != text:
            self.fail(f"'{text}'")
        self.index += 1
        return token

    def take_kind(self, kind: str, expected: str) -> Token:
        token = self.peek()
        if token is None or token.kind != kind:
            self.fail(expected)
        self.index += 1
        return token

    def polynomial(self) -> Tuple[Convention, List[Tuple[Dict[str, int], Fraction]]]:
        head = self.take_kind("ident", "'max' or 'min'")
        if head.text.lower() not in ("max", "min"):
            raise ParseError(head.position, "'max' or 'min'", head.text)
        convention = Convention(head.text.lower())
        self.take("(")
        terms = [self.term()]
        while self.peek() is not None and self.peek().text == ",":
            self.index += 1
            terms.append(self.term())
        self.take(")")
        if self.peek() is not None:
            self.fail("end of input")
        return convention, terms

    def term(self) -> Tuple[Dict[str, int], Fraction]:
        monomial: Dict[str, int] = {}
        constant = Fraction(0)
        sign = 1
        token = self.peek()
        if token is not None and token.text in ("+", "-"):
            sign = -1 if token.text == "-" else 1
            self.index += 1
        while True:
            name, value = self.atom()
            if name is None:
                constant += sign * value
            else:
                monomial[name] = monomial.get(name, 0) + sign * int(value)
            token = self.peek()
            if token is None or token.text not in ("+", "-"):
                break
            sign = -1 if token.text == "-" else 1
            self.index += 1
        return monomial, constant

    def atom(self) -> Tuple[Optional[str], Fraction]:
        token = self.peek()
        if token is None or token.kind not in ("int", "ident"):
            self.fail("a number or a variable")
        if token.kind == "ident":
            self.index += 1
            return self.variable(token), Fraction(1)
        self.index += 1
        value = Fraction(int(token.text))
        nxt = self.peek()
        if nxt is not None and nxt.text == "/":
            self.index += 1
            denominator = self.take_kind("int", "a denominator")
            if int(denominator.text) == 0:
                raise ParseError(denominator.position, "a non-zero denominator", denominator.text)
            value /= int(denominator.text)
            nxt = self.peek()
            if nxt is not None and (nxt.text == "*" or nxt.kind == "ident"):
                raise ParseError(nxt.position, "an integer exponent before a variable", nxt.text)
            return None, value
        if nxt is not None and nxt.text == "*":
            self.index += 1
            return self.variable(self.take_kind("ident", "a variable")), value
        if nxt is not None and nxt.kind == "ident":
            self.index += 1
            return self.variable(nxt), value
        return None, value

    def variable(self, token: Token) -> str:
        if token.text.lower() in ("max", "min"):
            raise ParseError(token.position, "a variable", token.text)
        if token.text not in self.positions:
            self.positions[token.text] = token.position
            self.appearance.append(token.text)
        return token.text


class TropicalService:
    """Tropical polynomials and their hypersurfaces"""

    def parse(self, src: str, variables: Optional[Sequence[str]] = None) -> TropicalPolynomial:
        """Parse "max(...)" / "min(...)" into a TropicalPolynomial.

        Variables are ordered by `variables` when given, otherwise by
        settings.VARIABLE_ORDER (alphabetical or first appearance).
        """
        parser = _Parser(src)
        convention, raw_terms = parser.polynomial()
        if variables is not None:
            order = list(variables)
            for name in parser.appearance:
                if name not in order:
                    raise ParseError(parser.positions[name], f"one of the declared variables {order}", name)
        elif settings.VARIABLE_ORDER == "appearance":
            order = list(parser.appearance)
        else:
            order = sorted(parser.appearance)
        terms = [
            Term(tuple(monomial.get(v, 0) for v in order), constant)
            for monomial, constant in raw_terms
        ]
        polynomial = TropicalPolynomial.merged(convention, order, terms)
        logger.debug(f"Parsed {convention.value} polynomial with {len(raw_terms)} terms "
                     f"({len(polynomial.terms)} after merging) in variables {order}")
        return polynomial

    def unparse(self, f: TropicalPolynomial) -> str:
        pieces = []
        for exponents, coefficient in f.terms:
            text = ""
            for name, e in zip(f.variables, exponents):
                if e == 0:
                    continue
                body = name if abs(e) == 1 else f"{abs(e)}*{name}"
                text += ("-" if e < 0 else ("+" if text else "")) + body
            if coefficient or not text:
                value = format_rat(abs(coefficient))
                text += ("-" if coefficient < 0 else ("+" if text else "")) + value
            pieces.append(text)
        return f"{f.convention.value}({', '.join(pieces)})"

    def region(self, f: TropicalPolynomial, i: int) -> HRep:
        """{x : term i is optimal}"""
        a_i, c_i = f.terms[i]
        rows = []
        for j, (a_j, c_j) in enumerate(f.terms):
            if j == i:
                continue
            if f.convention is Convention.MAX:
                rows.append((tuple(Fraction(p - q) for p, q in zip(a_i, a_j)), c_j - c_i))
            else:
                rows.append((tuple(Fraction(q - p) for p, q in zip(a_i, a_j)), c_i - c_j))
        return HRep(ambient_dim=f.n_variables, inequalities=tuple(rows))

    def tropical_hypersurface(self, f: TropicalPolynomial) -> PolyhedralComplex:
        """The corner locus of f as a polyhedral complex.

        Maximal cells are the facets shared by the full-dimensional regions
        where a single term is optimal. When the Newton polytope is not
        full-dimensional the locus is invariant under a lineality space; it is
        quotiented out by keeping the generators orthogonal to it.
        """
        n = f.n_variables
        if n == 0:
            raise DegenerateInput("all terms share the empty exponent vector; a polynomial without variables has no hypersurface")
        if len(f.terms) < 2:
            logger.warning("Polynomial has a single term after merging; its hypersurface is empty")
            return polycomplex_service.build_complex([], [], [], ambient_dim=n)

        registry: Dict[Tuple[Fraction, ...], int] = {}
        maximal = set()
        lineality: Tuple = ()
        for i in range(len(f.terms)):
            h = self.region(f, i)
            v = polycomplex_service.dual_description(h)
            if v.is_empty:
                continue
            lineality = tuple((Fraction(0),) + l for l in v.lineality)
            generators = v.homogenized()
            if exactlin_service.rank(RatMatrix.from_rows(generators + list(lineality), n + 1)) < n + 1:
                continue
            for a, b in h.inequalities:
                normal = (-b,) + a
                tight = [g for g in generators if sum(x * y for x, y in zip(normal, g)) == 0]
                if not any(g[0] for g in tight):
                    continue
                if exactlin_service.rank(RatMatrix.from_rows(tight + list(lineality), n + 1)) != n:
                    continue
                cell = []
                for g in tight:
                    key = polycomplex_service.normalize_ray(g)
                    cell.append(registry.setdefault(key, len(registry)))
                maximal.add(frozenset(cell))

        # canonical ray order: vertices first, then far rays, each sorted
        order = sorted(registry, key=lambda r: (r[0] == 0, r))
        remap = {registry[r]: k for k, r in enumerate(order)}
        cells = sorted((frozenset(remap[i] for i in c) for c in maximal), key=lambda c: sorted(c))
        if lineality:
            logger.info(f"Quotienting out a lineality space of dimension {len(lineality)}")
        logger.info(f"Tropical hypersurface in Q^{n}: {len(order)} rays, {len(cells)} maximal cells")
        return polycomplex_service.build_complex(order, [], cells, ambient_dim=n)

    def relative_interior_point(self, pc: PolyhedralComplex, cell_id: int) -> Tuple[Fraction, ...]:
        """Barycenter of the vertices pushed along every far ray of the cell"""
        rays = [pc.rays[r] for r in sorted(pc.cells[cell_id].rays)]
        vertices = [r[1:] for r in rays if r[0] != 0]
        point = [sum(coords) / len(vertices) for coords in zip(*vertices)]
        for r in rays:
            if r[0] == 0:
                point = [p + x for p, x in zip(point, r[1:])]
        return tuple(point)

    def dual_subdivision(self, f: TropicalPolynomial, pc: PolyhedralComplex) -> Dict[int, Tuple[int, ...]]:
        """For every non-far cell, the terms optimal on its relative interior"""
        return {
            cell_id: f.optimal_terms(self.relative_interior_point(pc, cell_id))
            for cell_id in pc.non_far_ids
        }


# Create a singleton instance
tropical_service = TropicalService()
