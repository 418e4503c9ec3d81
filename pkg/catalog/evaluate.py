"""Reduction of trace expressions to canonical trace atoms and their evaluation.

A trace expression is first rewritten as a formal polynomial in trace atoms
(``AtomPoly``): every trace is expanded into products of units (letters,
standard polynomials of distinct letters, commutators of two letters),
standard polynomials are sorted with the alternating sign, and each atom is
rotated to its least cyclic form. Signed permutation sums are expanded here,
so the sign bookkeeping of a sum over S_6 collapses into a handful of atoms.

Evaluation against a matrix backend (symbolic or numeric) then only has to
compute one trace per distinct atom.
"""

import logging
from concurrent.futures import ThreadPoolExecutor, as_completed
from fractions import Fraction
from itertools import permutations, product
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from sympy.polys.domains import QQ
from sympy.polys.orderings import grlex
from sympy.polys.rings import PolyElement, PolyRing

from catalog.expr import (Atom, Commutator, Const, Letter, MatPow, MatProd, MatSum, PermGroup, Power,
                          Product, SignedSum, StdPoly, Sum, Trace, Unit, atom_name, unit_comm,
                          unit_letter, unit_letters, unit_std)
from core.partitions import perm_sign

logger = logging.getLogger(__name__)

Binding = Dict[Tuple[str, int], int]
Word = Tuple[Unit, ...]
MatLin = Dict[Word, Fraction]
AtomMonomial = Tuple[Tuple[Atom, int], ...]

PERMUTATION_BLOCK = 120
MATRIX_SIZE = 3


class ExpressionError(ValueError):
    """Raised when an expression cannot be evaluated (unbound placeholder, bad index)."""


class AtomPoly(dict):
    """Formal polynomial in trace atoms: monomial -> Fraction."""

    @classmethod
    def constant(cls, value) -> "AtomPoly":
        value = Fraction(value)
        return cls({(): value}) if value else cls()

    @classmethod
    def atom(cls, atom: Atom, coeff=1) -> "AtomPoly":
        return cls({((atom, 1),): Fraction(coeff)})

    def add(self, other: "AtomPoly", scale=1) -> "AtomPoly":
        out = AtomPoly(self)
        for mono, c in other.items():
            value = out.get(mono, 0) + c * scale
            if value:
                out[mono] = value
            else:
                out.pop(mono, None)
        return out

    def __mul__(self, other: "AtomPoly") -> "AtomPoly":
        out = AtomPoly()
        for m1, c1 in self.items():
            for m2, c2 in other.items():
                mono = _merge(m1, m2)
                value = out.get(mono, 0) + c1 * c2
                if value:
                    out[mono] = value
                else:
                    out.pop(mono, None)
        return out

    def power(self, n: int) -> "AtomPoly":
        result = AtomPoly.constant(1)
        for _ in range(n):
            result = result * self
        return result

    def atoms(self) -> List[Atom]:
        return sorted({a for mono in self for a, _ in mono})

    def letters(self) -> List[int]:
        return sorted({i for a in self.atoms() for u in a for i in unit_letters(u)})


def _merge(m1: AtomMonomial, m2: AtomMonomial) -> AtomMonomial:
    exps: Dict[Atom, int] = dict(m1)
    for a, e in m2:
        exps[a] = exps.get(a, 0) + e
    return tuple(sorted(exps.items()))


# ── matrix level ─────────────────────────────────────────────────────────

def _lin_add(acc: MatLin, other: MatLin, scale=1):
    for word, c in other.items():
        value = acc.get(word, 0) + c * scale
        if value:
            acc[word] = value
        else:
            acc.pop(word, None)


def _lin_mul(a: MatLin, b: MatLin) -> MatLin:
    out: MatLin = {}
    for w1, c1 in a.items():
        for w2, c2 in b.items():
            word = w1 + w2
            value = out.get(word, 0) + c1 * c2
            if value:
                out[word] = value
            else:
                out.pop(word, None)
    return out


def _single_letter(lin: MatLin) -> Optional[int]:
    if len(lin) != 1:
        return None
    (word, c), = lin.items()
    if c != 1 or len(word) != 1 or word[0][0] != "x":
        return None
    return word[0][1]


def standard_unit(args: Sequence[int]) -> Tuple[int, Optional[Unit]]:
    """(sign, unit) for s_k of distinct letters in sorted order; (0, None) on a repeat."""
    if len(set(args)) < len(args):
        return 0, None
    order = sorted(range(len(args)), key=lambda k: args[k])
    sign = perm_sign(order)
    ordered = tuple(args[k] for k in order)
    if len(ordered) == 1:
        return sign, unit_letter(ordered[0])
    if len(ordered) == 2:
        return sign, unit_comm(*ordered)
    return sign, unit_std(ordered)


def _bind(letter: Letter, binding: Binding) -> int:
    if letter.group is None:
        return letter.index
    key = (letter.group, letter.index)
    if key not in binding:
        raise ExpressionError(f"placeholder {letter} is not bound")
    return binding[key]


def reduce_matrix(node, binding: Binding) -> MatLin:
    if isinstance(node, Letter):
        return {(unit_letter(_bind(node, binding)),): Fraction(1)}
    if isinstance(node, MatProd):
        result: MatLin = {(): Fraction(1)}
        for f in node.factors:
            result = _lin_mul(result, reduce_matrix(f, binding))
        return result
    if isinstance(node, MatSum):
        acc: MatLin = {}
        for c, term in node.terms:
            _lin_add(acc, reduce_matrix(term, binding), c)
        return acc
    if isinstance(node, MatPow):
        base = reduce_matrix(node.base, binding)
        result = {(): Fraction(1)}
        for _ in range(node.exp):
            result = _lin_mul(result, base)
        return result
    if isinstance(node, Commutator):
        left = reduce_matrix(node.left, binding)
        right = reduce_matrix(node.right, binding)
        a, b = _single_letter(left), _single_letter(right)
        if a is not None and b is not None:
            sign, unit = standard_unit((a, b))
            return {(unit,): Fraction(sign)} if sign else {}
        acc = _lin_mul(left, right)
        _lin_add(acc, _lin_mul(right, left), -1)
        return acc
    if isinstance(node, StdPoly):
        args = [reduce_matrix(a, binding) for a in node.args]
        letters = [_single_letter(a) for a in args]
        if all(i is not None for i in letters):
            sign, unit = standard_unit(letters)
            return {(unit,): Fraction(sign)} if sign else {}
        acc = {}
        for perm in permutations(range(len(args))):
            term = {(): Fraction(1)}
            for k in perm:
                term = _lin_mul(term, args[k])
            _lin_add(acc, term, perm_sign(perm))
        return acc
    raise ExpressionError(f"not a matrix expression: {node!r}")


def canonical_atom(word: Word) -> Optional[Atom]:
    """Least rotation of a trace word; None when the trace vanishes identically."""
    if not word:
        return None
    if len(word) == 1:
        unit = word[0]
        # traceless letters, commutators and even standard polynomials
        if unit[0] in ("x", "c") or (unit[0] == "s" and len(unit[1]) % 2 == 0):
            return None
    return min(word[k:] + word[:k] for k in range(len(word)))


# ── scalar level ─────────────────────────────────────────────────────────

def _bindings(groups: Sequence[PermGroup]) -> Iterable[Tuple[int, Binding]]:
    per_group = []
    for g in groups:
        options = []
        for perm in permutations(range(len(g.domain))):
            images = {(g.name, g.domain[k]): g.domain[perm[k]] for k in range(len(g.domain))}
            options.append((perm_sign(perm), images))
        per_group.append(options)
    for combo in product(*per_group):
        sign = 1
        binding: Binding = {}
        for s, images in combo:
            sign *= s
            binding.update(images)
        yield sign, binding


def _reduce_block(body, block: List[Tuple[int, Binding]], outer: Binding) -> AtomPoly:
    acc = AtomPoly()
    for sign, binding in block:
        acc = acc.add(reduce_scalar(body, {**outer, **binding}), sign)
    return acc


def reduce_scalar(node, binding: Binding, workers: int = 1) -> AtomPoly:
    if isinstance(node, Const):
        return AtomPoly.constant(node.value)
    if isinstance(node, Trace):
        out = AtomPoly()
        for word, c in reduce_matrix(node.arg, binding).items():
            if not word:
                out = out.add(AtomPoly.constant(MATRIX_SIZE), c)
                continue
            atom = canonical_atom(word)
            if atom is not None:
                out = out.add(AtomPoly.atom(atom), c)
        return out
    if isinstance(node, Product):
        result = AtomPoly.constant(1)
        for f in node.factors:
            result = result * reduce_scalar(f, binding, workers)
            if not result:
                break
        return result
    if isinstance(node, Sum):
        acc = AtomPoly()
        for c, term in node.terms:
            acc = acc.add(reduce_scalar(term, binding, workers), c)
        return acc
    if isinstance(node, Power):
        return reduce_scalar(node.base, binding, workers).power(node.exp)
    if isinstance(node, SignedSum):
        terms = list(_bindings(node.groups))
        blocks = [terms[k:k + PERMUTATION_BLOCK] for k in range(0, len(terms), PERMUTATION_BLOCK)]
        if workers <= 1 or len(blocks) == 1:
            return _reduce_block(node.body, terms, binding)
        results: Dict[int, AtomPoly] = {}
        with ThreadPoolExecutor(max_workers=workers) as executor:
            futures = {executor.submit(_reduce_block, node.body, blk, binding): k
                       for k, blk in enumerate(blocks)}
            for future in as_completed(futures):
                results[futures[future]] = future.result()
        acc = AtomPoly()
        for k in sorted(results):
            acc = acc.add(results[k])
        return acc
    raise ExpressionError(f"not a scalar expression: {node!r}")


def reduce_to_atoms(expr, workers: int = 1) -> AtomPoly:
    """Formal polynomial in canonical trace atoms equal to ``expr``."""
    return reduce_scalar(expr, {}, workers)


# ── evaluation ───────────────────────────────────────────────────────────

def evaluate_atoms(poly: AtomPoly, backend):
    """Evaluate an atom polynomial with a matrix backend (anything with trace_atom/scalar/one/zero/d)."""
    letters = poly.letters()
    if letters and (letters[0] < 1 or letters[-1] > backend.d):
        raise ExpressionError(f"matrix index {letters[-1]} outside 1..{backend.d}")
    values = {a: backend.trace_atom(a) for a in poly.atoms()}
    powers: Dict[Tuple[Atom, int], object] = {}

    def power(atom: Atom, e: int):
        key = (atom, e)
        if key not in powers:
            powers[key] = values[atom] if e == 1 else power(atom, e - 1) * values[atom]
        return powers[key]

    total = backend.zero
    for mono, c in sorted(poly.items()):
        term = backend.scalar(c)
        for atom, e in mono:
            term = term * power(atom, e)
            if not term:
                break
        if term:
            total = total + term
    return total


def expand(expr, ctx, workers: int = 1):
    """Value of ``expr`` in the backend's scalar ring (a Poly for a symbolic context)."""
    return evaluate_atoms(reduce_to_atoms(expr, workers), ctx)


def numeric_eval(expr, pt):
    """Exact rational value of ``expr`` at a numeric sample point."""
    value = expand(expr, pt)
    value = Fraction(value)
    return QQ(value.numerator, value.denominator)


def word_of(atom_word: Word) -> List[Tuple[Fraction, Tuple[int, ...]]]:
    """Expand a unit word into plain letter words with signs."""
    out: List[Tuple[Fraction, Tuple[int, ...]]] = [(Fraction(1), ())]
    for unit in atom_word:
        letters = unit_letters(unit)
        if unit[0] == "x":
            choices = [(1, letters)]
        else:
            choices = [(perm_sign(p), tuple(letters[k] for k in p)) for p in permutations(range(len(letters)))]
        out = [(c * s, w + piece) for c, w in out for s, piece in choices]
    return out


def cyclic_word(word: Tuple[int, ...]) -> Optional[Tuple[int, ...]]:
    if len(word) <= 1:
        return None
    return min(word[k:] + word[:k] for k in range(len(word)))


def word_name(word: Tuple[int, ...]) -> str:
    return "w" + "_".join(str(i) for i in word)


def formal_words(expr) -> Dict[Tuple[Tuple[Tuple[int, ...], int], ...], Fraction]:
    """``expr`` as a polynomial in cyclic words of letters (trace atoms kept formal)."""
    atoms = reduce_to_atoms(expr)
    words: Dict[Atom, Dict[Tuple[int, ...], Fraction]] = {}
    for atom in atoms.atoms():
        lin: Dict[Tuple[int, ...], Fraction] = {}
        for c, w in word_of(atom):
            cw = cyclic_word(w)
            if cw is not None:
                lin[cw] = lin.get(cw, 0) + c
        words[atom] = {w: c for w, c in lin.items() if c}
    out: Dict[Tuple[Tuple[Tuple[int, ...], int], ...], Fraction] = {}
    for mono, coeff in atoms.items():
        partial = {(): coeff}
        for atom, e in mono:
            for _ in range(e):
                nxt = {}
                for m, c in partial.items():
                    for w, cw in words[atom].items():
                        key = _merge_words(m, w)
                        nxt[key] = nxt.get(key, 0) + c * cw
                partial = {m: c for m, c in nxt.items() if c}
        for m, c in partial.items():
            out[m] = out.get(m, 0) + c
    return {m: c for m, c in out.items() if c}


def _merge_words(mono, word):
    exps = dict(mono)
    exps[word] = exps.get(word, 0) + 1
    return tuple(sorted(exps.items()))


def formal_expand(*exprs) -> List[PolyElement]:
    """Expand expressions into one shared polynomial ring over cyclic trace words."""
    expanded = [formal_words(e) for e in exprs]
    words = sorted({w for poly in expanded for mono in poly for w, _ in mono})
    if not words:
        ring = PolyRing(["w0"], QQ, grlex)
        return [ring.from_dict({(0,): QQ(p[()].numerator, p[()].denominator)}) if p else ring.zero
                for p in expanded]
    ring = PolyRing([word_name(w) for w in words], QQ, grlex)
    index = {w: k for k, w in enumerate(words)}
    out = []
    for poly in expanded:
        terms = {}
        for mono, c in poly.items():
            exps = [0] * len(words)
            for w, e in mono:
                exps[index[w]] = e
            terms[tuple(exps)] = QQ(c.numerator, c.denominator)
        out.append(ring.from_dict(terms) if terms else ring.zero)
    return out


def multidegree_of(expr) -> Optional[Dict[int, int]]:
    """Letter multiplicities shared by every term, or None if ``expr`` is not multihomogeneous."""
    found = None
    for mono in reduce_to_atoms(expr):
        degrees: Dict[int, int] = {}
        for atom, e in mono:
            for unit in atom:
                for i in unit_letters(unit):
                    degrees[i] = degrees.get(i, 0) + e
        if found is None:
            found = degrees
        elif degrees != found:
            return None
    return found if found is not None else {}


def atom_names(poly: AtomPoly) -> Dict[str, Atom]:
    return {atom_name(a): a for a in poly.atoms()}


def unit_node(unit: Unit):
    if unit[0] == "x":
        return Letter(unit[1])
    if unit[0] == "c":
        return Commutator(Letter(unit[1]), Letter(unit[2]))
    return StdPoly(tuple(Letter(i) for i in unit[1]))


def atom_node(atom: Atom) -> Trace:
    nodes = tuple(unit_node(u) for u in atom)
    return Trace(nodes[0] if len(nodes) == 1 else MatProd(nodes))


def atoms_to_expr(poly: AtomPoly):
    """Write an atom polynomial back as a trace expression."""
    terms = []
    for mono, c in sorted(poly.items()):
        factors = tuple(atom_node(a) if e == 1 else Power(atom_node(a), e) for a, e in mono)
        if not factors:
            node = Const(Fraction(1))
        elif len(factors) == 1:
            node = factors[0]
        else:
            node = Product(factors)
        terms.append((c, node))
    return Sum(tuple(terms))
