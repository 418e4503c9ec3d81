from .expr import Letter, Trace, TraceExpr
from .parser import CatalogSyntaxError, parse_expr
