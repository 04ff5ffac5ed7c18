"""Finite boolean algebras with operators, term translations and finite duality.

A finite algebra is stored in atom form: elements are bit-sets over ``k``
named atoms and each operator is given by its value on the atoms, extended
additively. Operator tables over all ``2**k`` elements are numpy arrays so
that equations can be checked for a whole batch of assignments at once.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import permutations, product
from typing import Dict, FrozenSet, Iterator, Mapping, Optional, Sequence, Tuple

import numpy as np
from lark import Lark, Transformer, v_args
from lark.exceptions import UnexpectedInput, VisitError

from .config import SemanticsConfig
from .errors import BadParameter, BudgetExceeded, ParseError
from .formula import (
    And,
    Atom,
    Bot,
    Dia,
    Iff,
    Imp,
    ModalFormula,
    Not,
    Or,
    Signature,
    Top,
)
from .frames import Frame, bits

logger = logging.getLogger(__name__)


class BaoTerm:
    """Base class of algebra-signature terms."""

    def __str__(self) -> str:
        return format_term(self)


@dataclass(frozen=True)
class One(BaoTerm):
    pass


@dataclass(frozen=True)
class Zero(BaoTerm):
    pass


@dataclass(frozen=True)
class Var(BaoTerm):
    index: int


@dataclass(frozen=True)
class Minus(BaoTerm):
    child: BaoTerm


@dataclass(frozen=True)
class Plus(BaoTerm):
    left: BaoTerm
    right: BaoTerm


@dataclass(frozen=True)
class OpDia(BaoTerm):
    modality: str
    child: BaoTerm


def format_term(term: BaoTerm) -> str:
    if isinstance(term, One):
        return "1"
    if isinstance(term, Zero):
        return "0"
    if isinstance(term, Var):
        return f"v{term.index}"
    if isinstance(term, Minus):
        inner = format_term(term.child)
        return f"-({inner})" if isinstance(term.child, Plus) else f"-{inner}"
    if isinstance(term, OpDia):
        inner = format_term(term.child)
        return f"<{term.modality}>({inner})" if isinstance(term.child, Plus) else f"<{term.modality}>{inner}"
    if isinstance(term, Plus):
        right = format_term(term.right)
        if isinstance(term.right, Plus):
            right = f"({right})"
        return f"{format_term(term.left)} + {right}"
    raise TypeError(f"not an algebra term: {term!r}")


def term_vars(term: BaoTerm) -> FrozenSet[int]:
    if isinstance(term, Var):
        return frozenset((term.index,))
    if isinstance(term, (Minus, OpDia)):
        return term_vars(term.child)
    if isinstance(term, Plus):
        return term_vars(term.left) | term_vars(term.right)
    return frozenset()


def formula_to_term(formula: ModalFormula) -> BaoTerm:
    """The homomorphic translation; derived connectives are desugared through - and +."""
    if isinstance(formula, Top):
        return One()
    if isinstance(formula, Bot):
        return Zero()
    if isinstance(formula, Atom):
        return Var(formula.index)
    if isinstance(formula, Not):
        return Minus(formula_to_term(formula.child))
    if isinstance(formula, Dia):
        return OpDia(formula.modality, formula_to_term(formula.child))
    left = formula_to_term(formula.left)
    right = formula_to_term(formula.right)
    if isinstance(formula, Or):
        return Plus(left, right)
    if isinstance(formula, And):
        return Minus(Plus(Minus(left), Minus(right)))
    if isinstance(formula, Imp):
        return Plus(Minus(left), right)
    if isinstance(formula, Iff):
        forward = Plus(Minus(left), right)
        backward = Plus(Minus(right), left)
        return Minus(Plus(Minus(forward), Minus(backward)))
    raise TypeError(f"not a modal formula: {formula!r}")


def term_to_formula(term: BaoTerm) -> ModalFormula:
    if isinstance(term, One):
        return Top()
    if isinstance(term, Zero):
        return Bot()
    if isinstance(term, Var):
        return Atom(term.index)
    if isinstance(term, Minus):
        return Not(term_to_formula(term.child))
    if isinstance(term, OpDia):
        return Dia(term.modality, term_to_formula(term.child))
    if isinstance(term, Plus):
        return Or(term_to_formula(term.left), term_to_formula(term.right))
    raise TypeError(f"not an algebra term: {term!r}")


def equation_to_formula(lhs: BaoTerm, rhs: BaoTerm) -> ModalFormula:
    return Iff(term_to_formula(lhs), term_to_formula(rhs))


# ---------------------------------------------------------------------------
# Term syntax: v0, 1, 0, -t, t + u, <m>t, parentheses; an equation is t = u.

_TERM_GRAMMAR = r"""
    ?start: equation | sum
    equation: sum "=" sum

    ?sum: unary
        | sum "+" unary       -> plus
    ?unary: "-" unary         -> minus
          | "<" NAME ">" unary -> op_dia
          | primary
    ?primary: VAR             -> var
            | "1"             -> one
            | "0"             -> zero
            | "(" sum ")"

    VAR: /v[0-9]+/
    NAME: /[A-Za-z_][A-Za-z0-9_]*/

    %import common.WS
    %ignore WS
"""


@lru_cache(maxsize=1)
def _term_parser() -> Lark:
    return Lark(_TERM_GRAMMAR, parser="lalr")


@v_args(inline=True)
class _ToTerm(Transformer):
    def __init__(self, sig: Optional[Signature]):
        super().__init__()
        self._sig = sig

    def var(self, token):
        return Var(int(str(token)[1:]))

    def one(self):
        return One()

    def zero(self):
        return Zero()

    def minus(self, child):
        return Minus(child)

    def plus(self, left, right):
        return Plus(left, right)

    def op_dia(self, name, child):
        if self._sig is not None:
            self._sig.require(str(name))
        return OpDia(str(name), child)

    def equation(self, lhs, rhs):
        return (lhs, rhs)


def _parse_terms(text: str, sig: Optional[Signature]):
    try:
        tree = _term_parser().parse(text)
    except UnexpectedInput as exc:
        position = getattr(exc, "pos_in_stream", None)
        if position is None or position < 0:
            position = len(text)
        raise ParseError("malformed term", position) from None
    try:
        return _ToTerm(sig).transform(tree)
    except VisitError as exc:
        raise exc.orig_exc from None


def parse_term(text: str, sig: Optional[Signature] = None) -> BaoTerm:
    result = _parse_terms(text, sig)
    if isinstance(result, tuple):
        raise ParseError("expected a term, found an equation")
    return result


def parse_equation(text: str, sig: Optional[Signature] = None) -> Tuple[BaoTerm, BaoTerm]:
    result = _parse_terms(text, sig)
    if not isinstance(result, tuple):
        raise ParseError("expected an equation of the form lhs = rhs")
    return result


# ---------------------------------------------------------------------------
# Algebras


@dataclass(frozen=True)
class FiniteBAO:
    sig: Signature
    atoms: Tuple[str, ...]
    ops: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "atoms", tuple(self.atoms))
        object.__setattr__(self, "ops", tuple(tuple(images) for images in self.ops))
        if len(set(self.atoms)) != len(self.atoms):
            raise BadParameter("atom names must be unique")
        if len(self.ops) != len(self.sig.modalities):
            raise BadParameter("one operator per modality is required")
        limit = 1 << len(self.atoms)
        for images in self.ops:
            if len(images) != len(self.atoms) or any(a < 0 or a >= limit for a in images):
                raise BadParameter("operator images must be sets of the algebra's atoms")

    @classmethod
    def from_element_table(
        cls,
        sig: Signature,
        k: int,
        tables: Mapping[str, Sequence[int]],
        atoms: Optional[Sequence[str]] = None,
    ) -> "FiniteBAO":
        """Normalise full operator tables on the 2**k elements to atom form.

        Rejects tables that are not normal (op 0 = 0) or not additive.
        """
        size = 1 << k
        ops = []
        for modality in sig.modalities:
            table = [int(value) for value in tables[modality]]
            if len(table) != size:
                raise BadParameter(f"operator table for '{modality}' needs {size} entries")
            if table[0] != 0:
                raise BadParameter(f"operator '{modality}' is not normal")
            images = tuple(table[1 << i] for i in range(k))
            for element in range(size):
                expected = 0
                for i in bits(element):
                    expected |= images[i]
                if table[element] != expected:
                    raise BadParameter(f"operator '{modality}' is not additive at element {element}")
            ops.append(images)
        names = tuple(atoms) if atoms is not None else tuple(f"a{i}" for i in range(k))
        return cls(sig, names, tuple(ops))

    @property
    def k(self) -> int:
        return len(self.atoms)

    @property
    def top(self) -> int:
        return (1 << len(self.atoms)) - 1

    def images(self, modality: str) -> Tuple[int, ...]:
        return self.ops[self.sig.modalities.index(self.sig.require(modality))]

    def apply(self, modality: str, element: int) -> int:
        images = self.images(modality)
        out = 0
        for i in bits(element):
            out |= images[i]
        return out

    @cached_property
    def _tables(self) -> Dict[str, np.ndarray]:
        out = {}
        size = 1 << self.k
        for modality, images in zip(self.sig.modalities, self.ops):
            table = np.zeros(size, dtype=np.int64)
            for element in range(1, size):
                low = element & -element
                table[element] = table[element ^ low] | images[low.bit_length() - 1]
            out[modality] = table
        return out

    def op_table(self, modality: str) -> np.ndarray:
        return self._tables[self.sig.require(modality)]

    def names(self, element: int) -> FrozenSet[str]:
        return frozenset(self.atoms[i] for i in bits(element))


def evaluate(algebra: FiniteBAO, term: BaoTerm, assignment: Mapping[int, int]) -> int:
    """Value of `term` with variables mapped to elements; unassigned variables are 0."""
    if isinstance(term, One):
        return algebra.top
    if isinstance(term, Zero):
        return 0
    if isinstance(term, Var):
        return assignment.get(term.index, 0)
    if isinstance(term, Minus):
        return algebra.top & ~evaluate(algebra, term.child, assignment)
    if isinstance(term, Plus):
        return evaluate(algebra, term.left, assignment) | evaluate(algebra, term.right, assignment)
    if isinstance(term, OpDia):
        return algebra.apply(term.modality, evaluate(algebra, term.child, assignment))
    raise TypeError(f"not an algebra term: {term!r}")


def _evaluate_batch(algebra: FiniteBAO, term: BaoTerm, values: Mapping[int, np.ndarray], shape) -> np.ndarray:
    if isinstance(term, One):
        return np.full(shape, algebra.top, dtype=np.int64)
    if isinstance(term, Zero):
        return np.zeros(shape, dtype=np.int64)
    if isinstance(term, Var):
        return values[term.index]
    if isinstance(term, Minus):
        return algebra.top ^ _evaluate_batch(algebra, term.child, values, shape)
    if isinstance(term, Plus):
        return _evaluate_batch(algebra, term.left, values, shape) | _evaluate_batch(algebra, term.right, values, shape)
    if isinstance(term, OpDia):
        return algebra.op_table(term.modality)[_evaluate_batch(algebra, term.child, values, shape)]
    raise TypeError(f"not an algebra term: {term!r}")


@dataclass(frozen=True)
class EquationVerdict:
    holds: bool
    assignment: Optional[Dict[int, FrozenSet[str]]] = None

    def describe(self) -> str:
        if self.holds:
            return "VALID"
        parts = [f"v{var}={{{','.join(sorted(atoms))}}}" for var, atoms in sorted((self.assignment or {}).items())]
        return "REFUTED " + " ".join(parts)


def validates_equation(
    algebra: FiniteBAO,
    lhs: BaoTerm,
    rhs: BaoTerm,
    budget: int = SemanticsConfig().budget,
    batch_size: int = SemanticsConfig().batch_size,
) -> EquationVerdict:
    """Check lhs = rhs under every assignment; the witness is the first failing one.

    Assignment codes follow the same layout as frame valuations: bit
    ``v * k + i`` is set when the ``v``-th variable contains atom ``i``.
    """
    for term in (lhs, rhs):
        for modality in _term_modalities(term):
            algebra.sig.require(modality)
    variables = sorted(term_vars(lhs) | term_vars(rhs))
    required_bits = algebra.k * len(variables)
    total = 1 << required_bits
    evaluations = total * algebra.k
    if evaluations > budget:
        raise BudgetExceeded(required_bits, evaluations, budget)
    logger.debug("checking %s = %s over %d assignments", lhs, rhs, total)
    for start in range(0, total, batch_size):
        codes = np.arange(start, min(start + batch_size, total), dtype=np.int64)
        values = {var: (codes >> (pos * algebra.k)) & algebra.top for pos, var in enumerate(variables)}
        left = _evaluate_batch(algebra, lhs, values, codes.shape)
        right = _evaluate_batch(algebra, rhs, values, codes.shape)
        bad = np.flatnonzero(left != right)
        if bad.size:
            code = int(codes[bad[0]])
            assignment = {
                var: algebra.names((code >> (pos * algebra.k)) & algebra.top)
                for pos, var in enumerate(variables)
            }
            return EquationVerdict(False, assignment)
    return EquationVerdict(True)


def _term_modalities(term: BaoTerm) -> FrozenSet[str]:
    if isinstance(term, OpDia):
        return frozenset((term.modality,)) | _term_modalities(term.child)
    if isinstance(term, Minus):
        return _term_modalities(term.child)
    if isinstance(term, Plus):
        return _term_modalities(term.left) | _term_modalities(term.right)
    return frozenset()


def validates_formula(algebra: FiniteBAO, formula: ModalFormula, budget: int = SemanticsConfig().budget) -> EquationVerdict:
    return validates_equation(algebra, formula_to_term(formula), One(), budget)


# ---------------------------------------------------------------------------
# Duality


def complex_algebra(frame: Frame) -> FiniteBAO:
    """Power-set algebra of the frame; the operator sends {y} to the predecessors of y."""
    ops = []
    for rel in frame.relations:
        preds = [0] * frame.size
        for x, succ in enumerate(rel):
            for y in bits(succ):
                preds[y] |= 1 << x
        ops.append(tuple(preds))
    return FiniteBAO(frame.sig, frame.worlds, tuple(ops))


def ultrafilter_frame(algebra: FiniteBAO) -> Frame:
    """Worlds are the atoms (principal ultrafilters); R p q iff p lies below op(q)."""
    relations = []
    for images in algebra.ops:
        succ = [0] * algebra.k
        for q, image in enumerate(images):
            for p in bits(image):
                succ[p] |= 1 << q
        relations.append(tuple(succ))
    return Frame(algebra.sig, algebra.atoms, tuple(relations))


def canonical_extension(algebra: FiniteBAO) -> FiniteBAO:
    return complex_algebra(ultrafilter_frame(algebra))


def algebras_isomorphic(left: FiniteBAO, right: FiniteBAO, max_atoms: int = 8) -> bool:
    """Search atom bijections that commute with every operator."""
    if left.sig != right.sig or left.k != right.k:
        return False
    if left.k > max_atoms:
        raise BadParameter(f"isomorphism search is limited to {max_atoms} atoms")
    for perm in permutations(range(left.k)):
        ok = True
        for images_l, images_r in zip(left.ops, right.ops):
            for i, image in enumerate(images_l):
                mapped = 0
                for j in bits(image):
                    mapped |= 1 << perm[j]
                if mapped != images_r[perm[i]]:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return True
    return False


def enumerate_algebras(k: int, sig: Optional[Signature] = None) -> Iterator[FiniteBAO]:
    """Every single-operator algebra on k atoms, in lexicographic order of atom images."""
    sig = sig or Signature.of("d")
    if len(sig) != 1:
        raise BadParameter("algebra enumeration covers one operator only")
    atoms = tuple(f"a{i}" for i in range(k))
    for images in product(range(1 << k), repeat=k):
        yield FiniteBAO(sig, atoms, (images,))
