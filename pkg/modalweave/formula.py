"""Modal formulas: syntax tree, parser, printer, substitution and the ° translation."""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache, reduce
from typing import FrozenSet, Iterable, Iterator, Mapping, Optional, Tuple

from lark import Lark, Transformer, v_args
from lark.exceptions import UnexpectedCharacters, UnexpectedEOF, UnexpectedInput, VisitError

from .errors import BadParameter, ParseError, UnknownModality

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


@dataclass(frozen=True)
class Signature:
    """The ordered, nonempty set of diamond modalities a formula or frame speaks about."""

    modalities: Tuple[str, ...]

    def __post_init__(self):
        names = tuple(self.modalities)
        object.__setattr__(self, "modalities", names)
        if not names:
            raise BadParameter("a signature needs at least one modality")
        if len(set(names)) != len(names):
            raise BadParameter(f"duplicate modality names in {list(names)}")
        for name in names:
            if not _IDENT.fullmatch(name):
                raise BadParameter(f"modality name '{name}' is not an identifier")

    @classmethod
    def of(cls, *names: str) -> "Signature":
        return cls(tuple(names))

    @property
    def default(self) -> str:
        return self.modalities[0]

    def require(self, name: str) -> str:
        if name not in self.modalities:
            raise UnknownModality(name)
        return name

    def __iter__(self) -> Iterator[str]:
        return iter(self.modalities)

    def __len__(self) -> int:
        return len(self.modalities)


class ModalFormula:
    """Base class of the syntax tree. Nodes are immutable and hashable."""

    def __str__(self) -> str:
        return format_formula(self)


@dataclass(frozen=True, eq=True)
class Top(ModalFormula):
    pass


@dataclass(frozen=True, eq=True)
class Bot(ModalFormula):
    pass


@dataclass(frozen=True, eq=True)
class Atom(ModalFormula):
    index: int


@dataclass(frozen=True, eq=True)
class Not(ModalFormula):
    child: ModalFormula


@dataclass(frozen=True, eq=True)
class Dia(ModalFormula):
    modality: str
    child: ModalFormula


@dataclass(frozen=True, eq=True)
class BinaryFormula(ModalFormula):
    left: ModalFormula
    right: ModalFormula


@dataclass(frozen=True, eq=True)
class And(BinaryFormula):
    pass


@dataclass(frozen=True, eq=True)
class Or(BinaryFormula):
    pass


@dataclass(frozen=True, eq=True)
class Imp(BinaryFormula):
    pass


@dataclass(frozen=True, eq=True)
class Iff(BinaryFormula):
    pass


def box(modality: str, child: ModalFormula) -> ModalFormula:
    """[m]φ, stored as ~<m>~φ."""
    return Not(Dia(modality, Not(child)))


def box_parts(formula: ModalFormula) -> Optional[Tuple[str, ModalFormula]]:
    """Return (m, φ) when `formula` is the box-shaped node ~<m>~φ."""
    if isinstance(formula, Not) and isinstance(formula.child, Dia):
        inner = formula.child.child
        if isinstance(inner, Not):
            return formula.child.modality, inner.child
    return None


def dia_power(modality: str, n: int, child: ModalFormula) -> ModalFormula:
    """<m>^n φ; the zeroth power is φ itself."""
    if n < 0:
        raise BadParameter(f"diamond power must be >= 0, got {n}")
    for _ in range(n):
        child = Dia(modality, child)
    return child


def conj(items: Iterable[ModalFormula]) -> ModalFormula:
    items = list(items)
    return reduce(And, items) if items else Top()


def disj(items: Iterable[ModalFormula]) -> ModalFormula:
    items = list(items)
    return reduce(Or, items) if items else Bot()


def children(formula: ModalFormula) -> Tuple[ModalFormula, ...]:
    if isinstance(formula, (Not, Dia)):
        return (formula.child,)
    if isinstance(formula, BinaryFormula):
        return (formula.left, formula.right)
    return ()


def _rebuild(formula: ModalFormula, visit) -> ModalFormula:
    if isinstance(formula, Not):
        return Not(visit(formula.child))
    if isinstance(formula, Dia):
        return Dia(formula.modality, visit(formula.child))
    if isinstance(formula, BinaryFormula):
        return type(formula)(visit(formula.left), visit(formula.right))
    return formula


def atoms_of(formula: ModalFormula) -> FrozenSet[int]:
    if isinstance(formula, Atom):
        return frozenset((formula.index,))
    found: FrozenSet[int] = frozenset()
    for child in children(formula):
        found |= atoms_of(child)
    return found


def modalities_of(formula: ModalFormula) -> FrozenSet[str]:
    found = frozenset((formula.modality,)) if isinstance(formula, Dia) else frozenset()
    for child in children(formula):
        found |= modalities_of(child)
    return found


def modal_depth(formula: ModalFormula) -> int:
    depth = max((modal_depth(child) for child in children(formula)), default=0)
    return depth + 1 if isinstance(formula, Dia) else depth


def size(formula: ModalFormula) -> int:
    return 1 + sum(size(child) for child in children(formula))


def check_signature(formula: ModalFormula, sig: Signature) -> None:
    for name in sorted(modalities_of(formula)):
        sig.require(name)


def substitute(formula: ModalFormula, mapping: Mapping[int, ModalFormula]) -> ModalFormula:
    """Simultaneously replace atoms; unmapped atoms are left alone."""
    if isinstance(formula, Atom):
        return mapping.get(formula.index, formula)
    return _rebuild(formula, lambda child: substitute(child, mapping))


def circ_translate(formula: ModalFormula) -> ModalFormula:
    """The reflexive-closure translation: (<m>φ)° = φ° | <m>φ°, ([m]φ)° = φ° & [m]φ°."""
    parts = box_parts(formula)
    if parts is not None:
        modality, body = parts
        inner = circ_translate(body)
        return And(inner, box(modality, inner))
    if isinstance(formula, Dia):
        inner = circ_translate(formula.child)
        return Or(inner, Dia(formula.modality, inner))
    return _rebuild(formula, circ_translate)


# ---------------------------------------------------------------------------
# Printing

_PREC_IFF, _PREC_IMP, _PREC_OR, _PREC_AND, _PREC_UNARY = 1, 2, 3, 4, 5

_BINARY_SYMBOLS = {
    Iff: ("<->", _PREC_IFF, True),
    Imp: ("->", _PREC_IMP, True),
    Or: ("|", _PREC_OR, False),
    And: ("&", _PREC_AND, False),
}


def _precedence(formula: ModalFormula) -> int:
    entry = _BINARY_SYMBOLS.get(type(formula))
    return entry[1] if entry else _PREC_UNARY


def _operand(formula: ModalFormula) -> str:
    text = format_formula(formula)
    return text if _precedence(formula) == _PREC_UNARY else f"({text})"


def format_formula(formula: ModalFormula) -> str:
    """Print with minimal parentheses; ~<m>~φ is shown as [m]φ."""
    if isinstance(formula, Top):
        return "true"
    if isinstance(formula, Bot):
        return "false"
    if isinstance(formula, Atom):
        return f"p{formula.index}"
    parts = box_parts(formula)
    if parts is not None:
        return f"[{parts[0]}]{_operand(parts[1])}"
    if isinstance(formula, Not):
        return "~" + _operand(formula.child)
    if isinstance(formula, Dia):
        return f"<{formula.modality}>{_operand(formula.child)}"
    if isinstance(formula, BinaryFormula):
        symbol, prec, right_assoc = _BINARY_SYMBOLS[type(formula)]
        left = format_formula(formula.left)
        left_prec = _precedence(formula.left)
        if left_prec < prec or (right_assoc and left_prec == prec):
            left = f"({left})"
        right = format_formula(formula.right)
        right_prec = _precedence(formula.right)
        if right_prec < prec or (not right_assoc and right_prec == prec):
            right = f"({right})"
        return f"{left} {symbol} {right}"
    raise TypeError(f"not a modal formula: {formula!r}")


# ---------------------------------------------------------------------------
# Parsing

_GRAMMAR = r"""
    ?start: iff

    ?iff: imp
        | imp "<->" iff          -> iff_op
    ?imp: disj
        | disj "->" imp          -> imp_op
    ?disj: conj
         | disj "|" conj         -> or_op
    ?conj: unary
         | conj "&" unary        -> and_op
    ?unary: "~" unary            -> not_op
          | "<" NAME ">" unary   -> dia_op
          | "[" NAME "]" unary   -> box_op
          | primary
    ?primary: ATOM               -> atom
            | "true"             -> top
            | "false"            -> bot
            | "(" iff ")"

    ATOM: /p[0-9]+/
    NAME: /[A-Za-z_][A-Za-z0-9_]*/

    %import common.WS
    %ignore WS
"""


@lru_cache(maxsize=1)
def _parser() -> Lark:
    return Lark(_GRAMMAR, parser="lalr")


@v_args(inline=True)
class _ToFormula(Transformer):
    def __init__(self, sig: Optional[Signature]):
        super().__init__()
        self._sig = sig

    def _modality(self, token) -> str:
        name = str(token)
        if self._sig is not None:
            self._sig.require(name)
        return name

    def atom(self, token):
        return Atom(int(str(token)[1:]))

    def top(self):
        return Top()

    def bot(self):
        return Bot()

    def not_op(self, child):
        return Not(child)

    def dia_op(self, name, child):
        return Dia(self._modality(name), child)

    def box_op(self, name, child):
        return box(self._modality(name), child)

    def and_op(self, left, right):
        return And(left, right)

    def or_op(self, left, right):
        return Or(left, right)

    def imp_op(self, left, right):
        return Imp(left, right)

    def iff_op(self, left, right):
        return Iff(left, right)


def _describe(exc: UnexpectedInput, text: str) -> Tuple[str, int]:
    position = getattr(exc, "pos_in_stream", None)
    if position is None or position < 0 or isinstance(exc, UnexpectedEOF):
        return "unexpected end of input", len(text)
    if isinstance(exc, UnexpectedCharacters):
        return f"unexpected character {text[position]!r}", position
    token = getattr(exc, "token", None)
    if token is not None and token.type == "$END":
        return "unexpected end of input", len(text)
    return f"unexpected token {str(token)!r}", position


def parse_formula(text: str, sig: Optional[Signature] = None) -> ModalFormula:
    """Parse the ASCII formula grammar; `sig=None` accepts any modality name."""
    try:
        tree = _parser().parse(text)
    except UnexpectedInput as exc:
        message, position = _describe(exc, text)
        raise ParseError(message, position) from None
    try:
        return _ToFormula(sig).transform(tree)
    except VisitError as exc:
        raise exc.orig_exc from None
