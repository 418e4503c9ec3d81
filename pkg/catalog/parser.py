"""Parser for the catalog expression grammar.

Scalar level (outside traces)::

    expr    := ['+'|'-'] term (('+'|'-') term)*
    term    := factor (['*'] factor)*
    factor  := NUMBER ['/' NUMBER]
             | 'tr' ['^' INT] '(' mexpr ')' ['^' INT]
             | ('u'|'v') '(' mexpr (',' mexpr)* ')'
             | 'sum_sgn' '(' group (',' group)* ';' expr ')'
             | '(' expr ')' ['^' INT]
    group   := NAME ':' (INT | '{' INT (',' INT)* '}')

Matrix level (inside traces and standard polynomials)::

    mexpr   := ['+'|'-'] mterm (('+'|'-') mterm)*
    mterm   := [NUMBER] mfactor+
    mfactor := LETTER ['^' INT]
             | '[' mexpr ',' mexpr ']' ['^' INT]
             | 's' INT '(' mexpr (',' mexpr)* ')' ['^' INT]
             | '(' mexpr ')' ['^' INT]

Letters are ``x1``..``x9``; inside a signed sum ``xs2`` stands for
x_{s(2)} where ``s`` is the name of a declared permutation group.
``u(a,b)`` and ``v(a,b,c)`` are expanded on the spot into
tr(a^2)tr(b^2) - tr(ab)^2 and tr(a^2)tr(bc) - tr(ab)tr(ac).
"""

import re
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from catalog.expr import (Commutator, Const, Letter, MatPow, MatProd, MatSum, PermGroup, Power,
                          Product, SignedSum, StdPoly, Sum, Trace)

TOKEN_SPEC = [
    ('SPACE', r'\s+'),
    ('SUMSGN', r'sum_sgn'),
    ('TR', r'tr'),
    ('LETTER', r'x[a-z]?\d'),
    ('STD', r's\d'),
    ('GROUP', r'[a-z](?=\s*:)'),
    ('MACRO', r'[uv](?=\s*\()'),
    ('NUMBER', r'\d+'),
    ('PUNCT', r'[()\[\],;:+\-*^/{}]'),
]
TOKEN_RE = re.compile('|'.join(f'(?P<{name}>{pattern})' for name, pattern in TOKEN_SPEC))

MACROS = {'u': 2, 'v': 3}


class CatalogSyntaxError(ValueError):
    """Raised for malformed catalog text or expressions.

    ``pos`` is the character offset the parser had reached, when known.
    """

    def __init__(self, message: str, pos: Optional[int] = None):
        super().__init__(message)
        self.pos = pos


Token = Tuple[str, str, int]


def tokenize(text: str) -> List[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = TOKEN_RE.match(text, pos)
        if not m:
            raise CatalogSyntaxError(f"unexpected character {text[pos]!r} at {pos} in {text!r}", pos)
        kind = m.lastgroup
        if kind != 'SPACE':
            tokens.append((kind, m.group(), pos))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.pos = 0
        self.groups: dict = {}

    # ── token helpers ────────────────────────────────────────────────────

    def peek(self, offset: int = 0) -> Optional[Token]:
        k = self.pos + offset
        return self.tokens[k] if k < len(self.tokens) else None

    def at(self, value: str) -> bool:
        tok = self.peek()
        return tok is not None and tok[1] == value

    def at_kind(self, kind: str) -> bool:
        tok = self.peek()
        return tok is not None and tok[0] == kind

    def offset(self) -> int:
        tok = self.peek()
        return tok[2] if tok is not None else len(self.text)

    def advance(self) -> Token:
        tok = self.peek()
        if tok is None:
            raise CatalogSyntaxError(f"unexpected end of expression in {self.text!r}")
        self.pos += 1
        return tok

    def expect(self, value: str) -> Token:
        tok = self.advance()
        if tok[1] != value:
            raise CatalogSyntaxError(f"expected {value!r} at {tok[2]}, found {tok[1]!r} in {self.text!r}",
                                     tok[2])
        return tok

    def integer(self) -> int:
        tok = self.advance()
        if tok[0] != 'NUMBER':
            raise CatalogSyntaxError(f"expected an integer at {tok[2]}, found {tok[1]!r}", tok[2])
        return int(tok[1])

    def exponent(self) -> int:
        if self.at('^'):
            self.advance()
            return self.integer()
        return 1

    def number(self) -> Fraction:
        value = Fraction(self.integer())
        if self.at('/'):
            self.advance()
            den = self.integer()
            if den == 0:
                raise CatalogSyntaxError(f"zero denominator in {self.text!r}")
            value /= den
        return value

    # ── scalar level ─────────────────────────────────────────────────────

    def expr(self):
        terms = []
        sign = 1
        if self.at('+') or self.at('-'):
            sign = -1 if self.advance()[1] == '-' else 1
        while True:
            coeff, node = self.term()
            terms.append((sign * coeff, node))
            if self.at('+') or self.at('-'):
                sign = -1 if self.advance()[1] == '-' else 1
                continue
            break
        if len(terms) == 1 and terms[0][0] == 1:
            return terms[0][1]
        return Sum(tuple(terms))

    def starts_factor(self) -> bool:
        tok = self.peek()
        if tok is None:
            return False
        return tok[0] in ('NUMBER', 'TR', 'MACRO', 'SUMSGN') or tok[1] == '('

    def term(self) -> Tuple[Fraction, object]:
        coeff = Fraction(1)
        factors = []
        while True:
            if self.at_kind('NUMBER'):
                coeff *= self.number()
            else:
                factors.append(self.factor())
            if self.at('*'):
                self.advance()
                continue
            if not self.starts_factor():
                break
        if not factors:
            return Fraction(1), Const(coeff)
        node = factors[0] if len(factors) == 1 else Product(tuple(factors))
        return coeff, node

    def factor(self):
        tok = self.peek()
        if tok is None:
            raise CatalogSyntaxError(f"unexpected end of expression in {self.text!r}")
        if tok[0] == 'TR':
            self.advance()
            outer = self.exponent()
            self.expect('(')
            arg = self.mexpr()
            self.expect(')')
            node = Trace(arg)
            power = outer * self.exponent()
            return Power(node, power) if power != 1 else node
        if tok[0] == 'MACRO':
            return self.macro()
        if tok[0] == 'SUMSGN':
            return self.signed_sum()
        if tok[1] == '(':
            self.advance()
            inner = self.expr()
            self.expect(')')
            power = self.exponent()
            return Power(inner, power) if power != 1 else inner
        raise CatalogSyntaxError(f"unexpected {tok[1]!r} at {tok[2]} in {self.text!r}", tok[2])

    def macro(self):
        name = self.advance()[1]
        self.expect('(')
        args = [self.mexpr()]
        while self.at(','):
            self.advance()
            args.append(self.mexpr())
        self.expect(')')
        if len(args) != MACROS[name]:
            raise CatalogSyntaxError(f"{name}() takes {MACROS[name]} arguments, got {len(args)}")
        return expand_macro(name, args)

    def signed_sum(self):
        self.advance()
        self.expect('(')
        groups = [self.group()]
        while self.at(','):
            self.advance()
            groups.append(self.group())
        self.expect(';')
        outer = self.groups
        self.groups = dict(outer, **{g.name: g for g in groups})
        body = self.expr()
        self.groups = outer
        self.expect(')')
        return SignedSum(tuple(groups), body)

    def group(self) -> PermGroup:
        tok = self.advance()
        if tok[0] != 'GROUP':
            raise CatalogSyntaxError(f"expected a group name at {tok[2]}, found {tok[1]!r}", tok[2])
        self.expect(':')
        if self.at('{'):
            self.advance()
            domain = [self.integer()]
            while self.at(','):
                self.advance()
                domain.append(self.integer())
            self.expect('}')
        else:
            domain = list(range(1, self.integer() + 1))
        if len(set(domain)) != len(domain) or not domain:
            raise CatalogSyntaxError(f"bad permutation domain {domain} for group {tok[1]}")
        return PermGroup(tok[1], tuple(domain))

    # ── matrix level ─────────────────────────────────────────────────────

    def mexpr(self):
        terms = []
        sign = 1
        if self.at('+') or self.at('-'):
            sign = -1 if self.advance()[1] == '-' else 1
        while True:
            coeff, node = self.mterm()
            terms.append((sign * coeff, node))
            if self.at('+') or self.at('-'):
                sign = -1 if self.advance()[1] == '-' else 1
                continue
            break
        if len(terms) == 1 and terms[0][0] == 1:
            return terms[0][1]
        return MatSum(tuple(terms))

    def starts_mfactor(self) -> bool:
        tok = self.peek()
        return tok is not None and (tok[0] in ('LETTER', 'STD') or tok[1] in ('[', '('))

    def mterm(self) -> Tuple[Fraction, object]:
        coeff = Fraction(1)
        if self.at_kind('NUMBER'):
            coeff = self.number()
        factors = [self.mfactor()]
        while self.starts_mfactor():
            factors.append(self.mfactor())
        node = factors[0] if len(factors) == 1 else MatProd(tuple(factors))
        return coeff, node

    def mfactor(self):
        tok = self.advance()
        if tok[0] == 'LETTER':
            node = self.letter(tok)
        elif tok[1] == '[':
            left = self.mexpr()
            self.expect(',')
            right = self.mexpr()
            self.expect(']')
            node = Commutator(left, right)
        elif tok[0] == 'STD':
            k = int(tok[1][1:])
            self.expect('(')
            args = [self.mexpr()]
            while self.at(','):
                self.advance()
                args.append(self.mexpr())
            self.expect(')')
            if len(args) != k:
                raise CatalogSyntaxError(f"s{k} takes {k} arguments, got {len(args)} in {self.text!r}")
            node = StdPoly(tuple(args))
        elif tok[1] == '(':
            node = self.mexpr()
            self.expect(')')
        else:
            raise CatalogSyntaxError(f"unexpected {tok[1]!r} at {tok[2]} in {self.text!r}", tok[2])
        power = self.exponent()
        return MatPow(node, power) if power != 1 else node

    def letter(self, tok: Token) -> Letter:
        text = tok[1]
        if len(text) == 3:
            group = text[1]
            if group not in self.groups:
                raise CatalogSyntaxError(f"placeholder {text} outside a sum over group {group!r}")
            index = int(text[2])
            if index not in self.groups[group].domain:
                raise CatalogSyntaxError(f"placeholder {text} outside the domain of group {group!r}")
            return Letter(index, group)
        index = int(text[1])
        if index == 0:
            raise CatalogSyntaxError(f"matrix indices start at 1, got {text}")
        return Letter(index)

    def finish(self):
        if self.pos != len(self.tokens):
            tok = self.tokens[self.pos]
            raise CatalogSyntaxError(f"trailing {tok[1]!r} at {tok[2]} in {self.text!r}", tok[2])


def expand_macro(name: str, args) -> Sum:
    sq = lambda a: MatPow(a, 2)
    prod = lambda a, b: MatProd((a, b))
    if name == 'u':
        a, b = args
        return Sum(((Fraction(1), Product((Trace(sq(a)), Trace(sq(b))))),
                    (Fraction(-1), Power(Trace(prod(a, b)), 2))))
    a, b, c = args
    return Sum(((Fraction(1), Product((Trace(sq(a)), Trace(prod(b, c))))),
                (Fraction(-1), Product((Trace(prod(a, b)), Trace(prod(a, c)))))))


def parse_expr(text: str):
    """Parse a scalar trace expression."""
    if not text or not text.strip():
        raise CatalogSyntaxError("empty expression")
    parser = _Parser(text)
    try:
        node = parser.expr()
        parser.finish()
    except CatalogSyntaxError as e:
        if e.pos is None:
            e.pos = parser.offset()
        raise
    return node


def parse_matrix(text: str):
    """Parse a matrix expression (the argument of a trace)."""
    parser = _Parser(text)
    node = parser.mexpr()
    parser.finish()
    return node


def check_balanced(text: str) -> Optional[int]:
    """Position of the first unbalanced bracket, or None."""
    stack = []
    pairs = {')': '(', ']': '['}
    for pos, ch in enumerate(text):
        if ch in '([':
            stack.append((ch, pos))
        elif ch in ')]':
            if not stack or stack[-1][0] != pairs[ch]:
                return pos
            stack.pop()
    return stack[0][1] if stack else None


# ── bracket repair ───────────────────────────────────────────────────────

MAX_BRACKET_EDITS = 6
REPAIR_BEAM = 16


def _reach(text: str):
    """(expression, 0) if ``text`` parses, else (None, characters left after the failure point)."""
    try:
        return parse_expr(text), 0
    except CatalogSyntaxError as e:
        pos = e.pos if e.pos is not None else 0
        return None, max(len(text) - pos, 0) + 1


def _bracket_edits(text: str, stop: int) -> List[Tuple[str, str]]:
    try:
        starts = [tok[2] for tok in tokenize(text)]
    except CatalogSyntaxError:
        return []
    edits = []
    for i, ch in enumerate(text[:stop + 1]):
        if ch in '()':
            edits.append((f"delete {ch!r} at {i}", text[:i] + text[i + 1:]))
    for i in starts + [len(text)]:
        if i <= stop:
            edits.append((f"insert ')' at {i}", text[:i] + ')' + text[i:]))
    return edits


def bracket_variants(text: str, max_edits: int = MAX_BRACKET_EDITS,
                     beam: int = REPAIR_BEAM) -> List[Tuple[str, object]]:
    """Readings of a damaged expression with the fewest bracket edits.

    An edit deletes one round bracket or inserts a closing one, anywhere
    before the point where parsing stops. After each round only the
    ``beam`` candidates that parse furthest are extended. Returns
    (edit description, expression) pairs, one per distinct expression
    found at the smallest number of edits; empty when ``text`` parses
    already or no reading is found within ``max_edits``.
    """
    node, left = _reach(text)
    if node is not None:
        return []
    frontier = [(text, len(text) - left + 1, ())]
    seen = {text}
    for _ in range(max_edits):
        found: Dict[str, Tuple[Tuple[str, ...], object]] = {}
        scored = []
        for current, stop, steps in frontier:
            for description, candidate in _bracket_edits(current, stop):
                if candidate in seen:
                    continue
                seen.add(candidate)
                node, left = _reach(candidate)
                if node is not None:
                    found[candidate] = (steps + (description,), node)
                else:
                    scored.append((left, len(candidate), candidate, steps + (description,)))
        if found:
            out: List[Tuple[str, object]] = []
            for candidate in sorted(found, key=lambda c: (len(c), c)):
                steps, node = found[candidate]
                if all(node != other for _, other in out):
                    out.append(("; ".join(steps), node))
            return out
        scored.sort(key=lambda s: s[:3])
        frontier = [(c, len(c) - left + 1, s) for left, _, c, s in scored[:beam]]
    return []
