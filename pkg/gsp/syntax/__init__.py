"""Surface syntax: nodes, parser and unparser."""

from gsp.syntax.parser import parse, parse_file
from gsp.syntax.unparse import render_surface, unparse, unparse_expr

__all__ = ["parse", "parse_file", "render_surface", "unparse", "unparse_expr"]
