"""Command line front end; complexes travel between subcommands as JSON on stdin/stdout."""
import argparse
import json
import sys
from typing import List, Optional, Sequence
from loguru import logger
from pydantic import BaseModel, ValidationError

from app.core.config import settings
from app.core.errors import PipelineError, SheafHomologyError
from app.core.logger import configure_logging
from app.models.chain import Variant
from app.models.polyhedral import PolyhedralComplex
from app.models.schemas import (
    ChainComplexPayload, ComplexPayload, GenerateRequest, GeneratorKind, MatroidPayload, SheafPayload,
)
from app.models.sheaf import CellSheaf, SheafKind
from app.models.tropical import Convention
from app.services.pipeline_service import pipeline_service

PROG = "sheafhom"


class _ArgumentParser(argparse.ArgumentParser):
    """Usage errors are input errors: exit code 1"""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _non_negative(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer")
    if value < 0:
        raise argparse.ArgumentTypeError(f"wedge degree must be non-negative, got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog=PROG, description="Cellular sheaf (co)homology of polyhedral complexes")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    commands = parser.add_subparsers(dest="command", required=True)

    generate = commands.add_parser("generate", help="emit a complex as JSON")
    sources = generate.add_subparsers(dest="source", required=True)
    cube = sources.add_parser("cube", help="the complex of faces of [0,1]^D")
    cube.add_argument("d", type=int, metavar="D")
    bergman = sources.add_parser("bergman", help="Bergman fan of a connected matroid")
    choice = bergman.add_mutually_exclusive_group(required=True)
    choice.add_argument("--uniform", nargs=2, type=int, metavar=("R", "N"), help="uniform matroid U(R,N)")
    choice.add_argument("--graph", metavar="complete:K", help="graphic matroid of a complete graph")
    choice.add_argument("--matroid", metavar="FILE", help='matroid JSON {"n": n, "bases": [[...]]}')
    bergman.add_argument("--convention", choices=[c.value for c in Convention], default=Convention.MAX.value)
    hypersurface = sources.add_parser("hypersurface", help="tropical hypersurface of a polynomial")
    hypersurface.add_argument("polynomial", metavar="POLY", help='e.g. "max(0,x+5,y+3,x+y+9)"')
    hypersurface.add_argument("--variables", metavar="x,y,z", help="explicit variable order")

    for name, help_text in (("betti", "Betti numbers of a (co)sheaf complex"),
                            ("print-complex", "chain group dimensions as k^n arrows"),
                            ("chain", "export the assembled (co)chain complex as JSON")):
        sub = commands.add_parser(name, help=help_text)
        sheaf = sub.add_mutually_exclusive_group(required=True)
        sheaf.add_argument("--sheaf", choices=[k.value for k in SheafKind], help="sheaf construction")
        sheaf.add_argument("--sheaf-file", metavar="FILE", help="hand-built sheaf JSON")
        sub.add_argument("--p", type=_non_negative, default=0, help="wedge degree")
        sub.add_argument("--variant", choices=[v.value for v in Variant], required=True)
        sub.add_argument("-i", "--input", metavar="FILE", help="complex JSON (stdin when omitted)")
        if name == "betti":
            sub.add_argument("--all-p", action="store_true", help="one row per p = 0..d")
            sub.add_argument("--json", action="store_true", help="emit the table as JSON")

    homology = commands.add_parser("homology", help="Betti numbers of an imported chain complex JSON")
    homology.add_argument("-i", "--input", metavar="FILE", help="chain complex JSON (stdin when omitted)")
    output = homology.add_mutually_exclusive_group()
    output.add_argument("--print", action="store_true", help="emit the k^n arrows instead")
    output.add_argument("--json", action="store_true", help="emit dimensions, Betti numbers and text as JSON")

    for name, help_text in (("validate", "sheaf functoriality and d o d = 0 checks"),
                            ("info", "f-vectors and face classification")):
        sub = commands.add_parser(name, help=help_text)
        sub.add_argument("-i", "--input", metavar="FILE", help="complex JSON (stdin when omitted)")
    return parser


def _read_json(path: Optional[str]) -> dict:
    try:
        if path is None:
            return json.loads(sys.stdin.read())
        with open(path, "r", encoding="utf-8") as f:
            return json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise PipelineError(f"cannot read JSON from {path or 'stdin'}: {e}") from e


def _read_payload(model: type, path: Optional[str], what: str) -> BaseModel:
    try:
        return model.model_validate(_read_json(path))
    except ValidationError as e:
        raise PipelineError(f"invalid {what} JSON: {e}") from e


def _read_complex(path: Optional[str]) -> PolyhedralComplex:
    return _read_payload(ComplexPayload, path, "complex").to_complex()


def _read_sheaf(args: argparse.Namespace, pc: PolyhedralComplex) -> Optional[CellSheaf]:
    if args.sheaf_file is None:
        return None
    return pipeline_service.load_sheaf(pc, _read_payload(SheafPayload, args.sheaf_file, "sheaf"))


def _generate_request(args: argparse.Namespace) -> GenerateRequest:
    kind = GeneratorKind(args.source)
    if kind is GeneratorKind.CUBE:
        return GenerateRequest(kind=kind, d=args.d)
    if kind is GeneratorKind.HYPERSURFACE:
        variables = [v.strip() for v in args.variables.split(",")] if args.variables else None
        return GenerateRequest(kind=kind, polynomial=args.polynomial, variables=variables)
    matroid = None
    if args.matroid is not None:
        matroid = _read_payload(MatroidPayload, args.matroid, "matroid")
    return GenerateRequest(kind=kind, uniform=args.uniform, graph=args.graph, matroid=matroid,
                           convention=Convention(args.convention))


def _format_rows(rows: Sequence[Sequence[int]]) -> str:
    return "\n".join(" ".join(str(b) for b in row) for row in rows)


def _dispatch(args: argparse.Namespace) -> int:
    if args.command == "generate":
        try:
            request = _generate_request(args)
        except ValidationError as e:
            raise PipelineError(f"invalid generator arguments: {e}") from e
        pc = pipeline_service.generate(request)
        print(ComplexPayload.from_complex(pc).model_dump_json())
        return 0

    if args.command == "homology":
        cc = pipeline_service.load_chain_complex(_read_payload(ChainComplexPayload, args.input, "chain complex"))
        result = pipeline_service.homology(cc)
        if args.json:
            print(result.model_dump_json())
        elif args.print:
            print(result.text)
        else:
            print(_format_rows([result.betti]))
        return 0

    pc = _read_complex(args.input)
    if args.command in ("betti", "print-complex", "chain"):
        kind = SheafKind(args.sheaf) if args.sheaf else None
        variant = Variant(args.variant)
        sheaf = _read_sheaf(args, pc)
        if args.command == "betti":
            table = pipeline_service.betti(pc, kind, variant, p=args.p, all_p=args.all_p, sheaf=sheaf)
            print(table.model_dump_json() if args.json else _format_rows(table.rows))
        elif args.command == "print-complex":
            print(pipeline_service.print_complex(pc, kind, args.p, variant, sheaf))
        else:
            cc = pipeline_service.chain_complex(pc, kind, args.p, variant, sheaf)
            print(ChainComplexPayload.from_chain_complex(cc).model_dump_json())
        return 0
    if args.command == "info":
        print(pipeline_service.info(pc).model_dump_json())
        return 0

    report = pipeline_service.validate(pc)
    print(report.model_dump_json())
    return 0 if report.ok else 2


def run(argv: Optional[List[str]] = None) -> int:
    """Parse arguments, run one subcommand and return the exit code"""
    args = build_parser().parse_args(argv)
    configure_logging("DEBUG" if args.verbose else settings.CLI_LOG_LEVEL)
    try:
        return _dispatch(args)
    except SheafHomologyError as e:
        logger.debug(f"{type(e).__name__}: {e}")
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    except Exception as e:
        logger.exception("Unexpected failure")
        print(f"error: internal failure: {e}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
