from typing import Optional
import pprint

from parsimonious.exceptions import ParseError, VisitationError

from ...errors import ProcessSyntaxError
from .grammar import grammar
from .interpreter import ParsedProcess, ProcessInterpreter, ProcessVisitor

visitor = ProcessVisitor()


def parse_process_ast(code: str) -> dict:
    """Parse the given process string and return its AST."""
    try:
        raw_ast = grammar.parse(code)
        return visitor.visit(raw_ast)
    except (ParseError, VisitationError) as e:
        raise ProcessSyntaxError(f"Cannot parse process {code!r}: {e}") from e


def parse_process(code: str, n: Optional[int] = None, print_ast: bool = False) -> ParsedProcess:
    """Parse and evaluate a process string; `n` replaces the `N` placeholder."""
    ast = parse_process_ast(code)
    if print_ast:
        pprint.pp(ast)
    return ProcessInterpreter(n).eval(ast)
