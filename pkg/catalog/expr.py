"""Trace expressions: formal polynomials in traces of matrix expressions.

Matrix-level nodes build the argument of a trace; scalar-level nodes combine
traces with rational coefficients. All nodes are frozen dataclasses, so
expressions hash and compare structurally and can key caches.

Letters are either concrete (``Letter(3)`` is x_3) or placeholders bound by
a signed permutation sum (``Letter("s", 2)`` is x_{sigma(2)}).
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple, Union


@dataclass(frozen=True)
class Letter:
    index: int
    group: Optional[str] = None

    def __str__(self):
        return f"x{self.group or ''}{self.index}"


@dataclass(frozen=True)
class MatProd:
    factors: Tuple["MatNode", ...]

    def __str__(self):
        return "".join(_mat_factor_str(f) for f in self.factors)


@dataclass(frozen=True)
class MatSum:
    terms: Tuple[Tuple[Fraction, "MatNode"], ...]

    def __str__(self):
        return _signed_join((c, str(n)) for c, n in self.terms)


@dataclass(frozen=True)
class Commutator:
    left: "MatNode"
    right: "MatNode"

    def __str__(self):
        return f"[{self.left},{self.right}]"


@dataclass(frozen=True)
class StdPoly:
    args: Tuple["MatNode", ...]

    @property
    def k(self) -> int:
        return len(self.args)

    def __str__(self):
        return f"s{self.k}({','.join(str(a) for a in self.args)})"


@dataclass(frozen=True)
class MatPow:
    base: "MatNode"
    exp: int

    def __str__(self):
        return f"{_mat_factor_str(self.base)}^{self.exp}"


MatNode = Union[Letter, MatProd, MatSum, Commutator, StdPoly, MatPow]


@dataclass(frozen=True)
class Const:
    value: Fraction

    def __str__(self):
        return str(self.value)


@dataclass(frozen=True)
class Trace:
    arg: MatNode

    def __str__(self):
        return f"tr({self.arg})"


@dataclass(frozen=True)
class Product:
    factors: Tuple["TraceExpr", ...]

    def __str__(self):
        return "".join(_scalar_factor_str(f) for f in self.factors)


@dataclass(frozen=True)
class Sum:
    terms: Tuple[Tuple[Fraction, "TraceExpr"], ...]

    def __str__(self):
        return _signed_join((c, _scalar_factor_str(n) if isinstance(n, Sum) else str(n))
                            for c, n in self.terms)


@dataclass(frozen=True)
class Power:
    base: "TraceExpr"
    exp: int

    def __str__(self):
        return f"{_scalar_factor_str(self.base)}^{self.exp}"


@dataclass(frozen=True)
class PermGroup:
    """sigma ranges over permutations of ``domain``; placeholders carry ``name``."""
    name: str
    domain: Tuple[int, ...]

    def __str__(self):
        if self.domain == tuple(range(1, len(self.domain) + 1)):
            return f"{self.name}:{len(self.domain)}"
        return f"{self.name}:{{{','.join(str(i) for i in self.domain)}}}"


@dataclass(frozen=True)
class SignedSum:
    """Sum over all sigma in the groups of sign(sigma) * body(sigma)."""
    groups: Tuple[PermGroup, ...]
    body: "TraceExpr"

    def __str__(self):
        return f"sum_sgn({', '.join(str(g) for g in self.groups)}; {self.body})"


TraceExpr = Union[Const, Trace, Product, Sum, Power, SignedSum]


def _signed_join(pairs) -> str:
    out = []
    for k, (c, text) in enumerate(pairs):
        sign = "-" if c < 0 else ("+" if k else "")
        mag = abs(c)
        coef = "" if mag == 1 else (f"{mag}" if mag.denominator == 1 else f"{mag.numerator}/{mag.denominator}")
        out.append(f"{sign}{coef}{text}")
    return "".join(out) if out else "0"


def _mat_factor_str(node) -> str:
    if isinstance(node, (MatSum, MatProd)) and not (isinstance(node, MatProd) and len(node.factors) == 1):
        return f"({node})"
    return str(node)


def _scalar_factor_str(node) -> str:
    if isinstance(node, (Sum, Product, Const)):
        return f"({node})"
    return str(node)


# Units of a canonical trace atom.  An atom is tr(u_1 u_2 ... u_n) with each
# u a letter, a standard polynomial of distinct letters, or a commutator of
# two letters:  ("x", i) | ("s", (a, b, c, ...)) | ("c", a, b).
Unit = Tuple
Atom = Tuple[Unit, ...]


def unit_letter(i: int) -> Unit:
    return ("x", i)


def unit_std(args: Tuple[int, ...]) -> Unit:
    return ("s", tuple(args))


def unit_comm(a: int, b: int) -> Unit:
    return ("c", a, b)


def unit_letters(unit: Unit) -> Tuple[int, ...]:
    if unit[0] == "x":
        return (unit[1],)
    if unit[0] == "s":
        return unit[1]
    return (unit[1], unit[2])


def atom_name(atom: Atom) -> str:
    parts = []
    for u in atom:
        if u[0] == "x":
            parts.append(f"x{u[1]}")
        elif u[0] == "s":
            parts.append(f"s{len(u[1])}({','.join(f'x{i}' for i in u[1])})")
        else:
            parts.append(f"[x{u[1]},x{u[2]}]")
    return f"tr({''.join(parts)})"


def word_expr(letters, coeff: Fraction = Fraction(1)) -> TraceExpr:
    """tr(x_{l1} x_{l2} ...) as an expression."""
    node = Trace(MatProd(tuple(Letter(i) for i in letters)))
    return node if coeff == 1 else Sum(((Fraction(coeff), node),))


def linear_combination(pairs) -> TraceExpr:
    """sum of c_i * e_i, dropping zero coefficients."""
    terms = tuple((Fraction(c), e) for c, e in pairs if c)
    return Sum(terms)
