"""Command-line interface and the functor expression parser."""

from .main import RunConfig, build_parser, main
from .parser import ParseError, parse_functor_expr

__all__ = ["ParseError", "RunConfig", "build_parser", "main", "parse_functor_expr"]
