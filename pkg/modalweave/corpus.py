"""Frame families, formula families, exhaustive enumerators and seeded samplers.

All generators are deterministic: the same parameters give the same world
order and the same relation. Formulas are built without simplification and
with fixed atom conventions: axiom atoms q_i are p_i, and the extra atom of
the separating formulas is the first index not used by the axiom part.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from itertools import product
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .errors import BadParameter
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
    box,
    circ_translate,
    conj,
    dia_power,
    disj,
    modal_depth,
)
from .frames import Frame, Model, transitive_closure

logger = logging.getLogger(__name__)

MONO = Signature.of("d")


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise BadParameter(message)


# ---------------------------------------------------------------------------
# Frame families


def d_frame(j: int) -> Frame:
    """The intransitive diamond-shaped frame validating 5_2 but refuting phi_j."""
    _require(j >= 0, f"D_j needs j >= 0, got {j}")
    if j == 0:
        return Frame.from_pairs(MONO, ["1", "0'", "0''"], {"d": [("1", "0'"), ("1", "0''")]})
    top, left, right = str(j + 1), f"{j}'", f"{j}''"
    tail = [str(i) for i in range(j - 1, -1, -1)]
    pairs = [(top, left), (top, right), (left, str(j - 1)), (right, str(j - 1))]
    pairs += [(str(i), str(i - 1)) for i in range(j - 1, 0, -1)]
    return Frame.from_pairs(MONO, [top, left, right] + tail, {"d": pairs})


def g_frame(j: int, n_points: int) -> Frame:
    """Irreflexive transitive frame: 0 sees every a_l and 1..j, each a_l sees 1..j, k sees m for k < m."""
    _require(j >= 0, f"G_j needs j >= 0, got {j}")
    _require(n_points >= 1, f"G_j needs at least one a-point, got {n_points}")
    a_points = [f"a{l}" for l in range(n_points)]
    line = [str(m) for m in range(1, j + 1)]
    pairs = [(str(k), str(m)) for m in range(1, j + 1) for k in range(m)]
    for a in a_points:
        pairs.append(("0", a))
        pairs += [(a, m) for m in line]
    return Frame.from_pairs(MONO, ["0"] + a_points + line, {"d": sorted(pairs)})


def e_frame(j: int, n: int) -> Frame:
    """Transitive frame whose only reflexive points r_0..r_n form an achronal set."""
    _require(j >= 1, f"E_j^n needs j >= 1, got {j}")
    _require(n >= 1, f"E_j^n needs n >= 1, got {n}")
    top, left, right = str(j + 1), f"{j}'", f"{j}''"
    rs = [f"r{i}" for i in range(n + 1)]
    tail = [str(i) for i in range(j - 1, -1, -1)]
    pairs = []
    for r in rs:
        pairs += [(top, r), (r, left), (r, right)]
    pairs += [(left, str(j - 1)), (right, str(j - 1))]
    pairs += [(str(i), str(i - 1)) for i in range(j - 1, 0, -1)]
    closed = transitive_closure(Frame.from_pairs(MONO, [top] + rs + [left, right] + tail, {"d": pairs}))
    loops = [(r, r) for r in rs]
    return Frame.from_pairs(MONO, closed.worlds, {"d": closed.pairs("d") + loops})


def lawn_rake(n_teeth: int) -> Frame:
    """a sees every tooth; each tooth sees only itself."""
    _require(n_teeth >= 1, f"lawn rake needs at least one tooth, got {n_teeth}")
    teeth = [str(i) for i in range(n_teeth)]
    pairs = [("a", x) for x in teeth] + [(x, x) for x in teeth]
    return Frame.from_pairs(MONO, ["a"] + teeth, {"d": pairs})


def fine_frame(n: int) -> Frame:
    """Truncation of the irreflexive transitive four-colour frame.

    b and c indices run over 0..n+1, a and d indices over 0..n-1. Every
    d-point sees every b- and c-point of the truncation.
    """
    _require(n >= 1, f"Fine frame needs N >= 1, got {n}")
    b = [f"b{i}" for i in range(n + 2)]
    c = [f"c{i}" for i in range(n + 2)]
    a = [f"a{i}" for i in range(n)]
    d = [f"d{i}" for i in range(n)]
    futures: Dict[str, List[str]] = {"b0": [], "c0": [], "b1": ["b0"], "c1": ["c0"]}
    for m in range(n):
        futures[f"b{m + 2}"] = b[: m + 2] + c[: m + 1]
        futures[f"c{m + 2}"] = b[: m + 1] + c[: m + 2]
    for m in range(n):
        futures[a[m]] = b[: m + 2] + c[: m + 2]
    for m in range(n):
        seen = set(d[m + 1:]) | set(b) | set(c)
        for k in range(m, n):
            seen.add(a[k])
            seen.update(futures[a[k]])
        futures[d[m]] = sorted(seen)
    pairs = [(x, y) for x, ys in futures.items() for y in ys]
    return Frame.from_pairs(MONO, b + c + a + d, {"d": pairs})


def _pair(i: int, k: int) -> str:
    return f"({i},{k})"


def _pair_worlds(n: int) -> List[str]:
    return ["a"] + [_pair(i, k) for i in range(n) for k in (0, 1)]


def xu_chain(n_columns: int) -> Frame:
    """Transitive frame with chained futures; the antichain of (i,0) points has pairwise distinct proper futures."""
    _require(n_columns >= 1, f"chain frame needs N >= 1, got {n_columns}")
    pairs = [("a", _pair(i, k)) for i in range(n_columns) for k in (0, 1)]
    pairs += [
        (_pair(i, k), _pair(j, 1)) for i in range(n_columns) for k in (0, 1) for j in range(i + 1)
    ]
    return Frame.from_pairs(MONO, _pair_worlds(n_columns), {"d": pairs})


def two_step(n_columns: int) -> Frame:
    """R(a) has no achronal pair while the two-step image of a is achronal."""
    _require(n_columns >= 1, f"two-step frame needs N >= 1, got {n_columns}")
    pairs = [("a", _pair(i, 0)) for i in range(n_columns)]
    pairs += [(_pair(i, 0), _pair(j, 1)) for i in range(n_columns) for j in range(i + 1)]
    pairs += [(_pair(i, 1), _pair(i, 1)) for i in range(n_columns)]
    return Frame.from_pairs(MONO, _pair_worlds(n_columns), {"d": pairs})


def omega_lt(n: int) -> Frame:
    _require(n >= 1, f"(omega,<) truncation needs N >= 1, got {n}")
    worlds = [str(i) for i in range(n)]
    return Frame.from_pairs(MONO, worlds, {"d": [(str(i), str(k)) for i in range(n) for k in range(i + 1, n)]})


def successor(n: int) -> Frame:
    _require(n >= 1, f"successor truncation needs N >= 1, got {n}")
    worlds = [str(i) for i in range(n)]
    return Frame.from_pairs(MONO, worlds, {"d": [(str(i), str(i + 1)) for i in range(n - 1)]})


def unrooted(n_columns: int) -> Frame:
    """Transitive, validates U_1, but its future-inclusion frame has an antichain of (i,0) points."""
    _require(n_columns >= 1, f"unrooted frame needs N >= 1, got {n_columns}")
    pairs = [("a", _pair(i, 1)) for i in range(n_columns)]
    pairs += [(_pair(i, 0), _pair(i, 1)) for i in range(n_columns)]
    return Frame.from_pairs(MONO, _pair_worlds(n_columns), {"d": pairs})


def k5_triangle() -> Frame:
    pairs = [("0", "1"), ("1", "1"), ("1", "2"), ("2", "1"), ("2", "2")]
    return Frame.from_pairs(MONO, ["0", "1", "2"], {"d": pairs})


@dataclass(frozen=True)
class FamilySpec:
    name: str
    params: Tuple[int, ...] = ()


FRAME_FAMILIES: Dict[str, Tuple[Callable[..., Frame], Tuple[str, ...]]] = {
    "Dj": (d_frame, ("j",)),
    "GjN": (g_frame, ("j", "N")),
    "Ejn": (e_frame, ("j", "n")),
    "LawnRake": (lawn_rake, ("N",)),
    "FineN": (fine_frame, ("N",)),
    "XuChainN": (xu_chain, ("N",)),
    "SternbergEx71N": (two_step, ("N",)),
    "OmegaLtN": (omega_lt, ("N",)),
    "SuccN": (successor, ("N",)),
    "UnrootedN": (unrooted, ("N",)),
    "K5Triangle": (k5_triangle, ()),
}

FAMILY_ALIASES: Dict[str, str] = {"TwoStepN": "SternbergEx71N"}


def gen_frame(spec: FamilySpec) -> Frame:
    name = FAMILY_ALIASES.get(spec.name, spec.name)
    try:
        builder, names = FRAME_FAMILIES[name]
    except KeyError:
        known = ", ".join(FRAME_FAMILIES)
        raise BadParameter(f"unknown frame family '{spec.name}' (known: {known})") from None
    if len(spec.params) != len(names):
        raise BadParameter(f"{spec.name} takes parameters ({', '.join(names)}), got {len(spec.params)}")
    return builder(*spec.params)


# ---------------------------------------------------------------------------
# Formula families


def p(i: int) -> Atom:
    return Atom(i)


def alpha(i: int, modality: str = "d") -> ModalFormula:
    """<m>^i true & ~<m>^(i+1) true."""
    _require(i >= 0, f"alpha_i needs i >= 0, got {i}")
    return And(dia_power(modality, i, Top()), Not(dia_power(modality, i + 1, Top())))


def separator(i: int, atom: int, modality: str = "d") -> ModalFormula:
    """[m](alpha_i -> p) | [m](alpha_i -> ~p)."""
    a = alpha(i, modality)
    return Or(box(modality, Imp(a, p(atom))), box(modality, Imp(a, Not(p(atom)))))


def phi(i: int, modality: str = "d") -> ModalFormula:
    return separator(i, 0, modality)


def axiom_5n(n: int, modality: str = "d") -> ModalFormula:
    _require(n >= 0, f"5_n needs n >= 0, got {n}")
    return Imp(dia_power(modality, n, p(0)), box(modality, Dia(modality, p(0))))


def axiom_U(n: int, dia: str = "d", black: Optional[str] = None) -> ModalFormula:
    """OR_i [dia]([black]q_i -> OR_{j != i} [black]q_j), with q_i = p_i."""
    _require(n >= 1, f"U_n needs n >= 1, got {n}")
    black = black or dia
    return disj(
        box(dia, Imp(box(black, p(i)), disj(box(black, p(j)) for j in range(n + 1) if j != i)))
        for i in range(n + 1)
    )


def axiom_U_alt(n: int, dia: str = "d", black: Optional[str] = None) -> ModalFormula:
    """AND_i <dia>(r_i & [black]q_i) -> OR_{i != j} <dia>(r_i & [black]q_j); q_i = p_i, r_i = p_(n+1+i)."""
    _require(n >= 1, f"U_n needs n >= 1, got {n}")
    black = black or dia
    r = [p(n + 1 + i) for i in range(n + 1)]
    premise = conj(Dia(dia, And(r[i], box(black, p(i)))) for i in range(n + 1))
    conclusion = disj(
        Dia(dia, And(r[i], box(black, p(j)))) for i in range(n + 1) for j in range(n + 1) if i != j
    )
    return Imp(premise, conclusion)


def axioms_U(sig: Signature, n: int, alternative: bool = False) -> List[ModalFormula]:
    build = axiom_U_alt if alternative else axiom_U
    return [build(n, dia, black) for dia, black in product(sig.modalities, repeat=2)]


def axiom_I(n: int, modality: str = "d") -> ModalFormula:
    """AND_i <m>q_i -> OR_{i != j} <m>(q_i & (q_j | <m>q_j))."""
    _require(n >= 1, f"I_n needs n >= 1, got {n}")
    m = modality
    premise = conj(Dia(m, p(i)) for i in range(n + 1))
    conclusion = disj(
        Dia(m, And(p(i), Or(p(j), Dia(m, p(j))))) for i in range(n + 1) for j in range(n + 1) if i != j
    )
    return Imp(premise, conclusion)


def axiom_4(modality: str = "d") -> ModalFormula:
    return Imp(Dia(modality, Dia(modality, p(0))), Dia(modality, p(0)))


def axiom_T(modality: str = "d") -> ModalFormula:
    return Imp(p(0), Dia(modality, p(0)))


def axiom_Grz(modality: str = "d") -> ModalFormula:
    m = modality
    return Imp(box(m, Imp(box(m, Imp(p(0), box(m, p(0)))), p(0))), p(0))


def axiom_M(modality: str = "d") -> ModalFormula:
    m = modality
    return Imp(box(m, Dia(m, p(0))), Dia(m, box(m, p(0))))


def axiom_Q(modality: str = "d") -> ModalFormula:
    m = modality
    return Imp(And(Dia(m, p(0)), box(m, Imp(p(0), box(m, p(0))))), p(0))


def formula_H(modality: str = "d") -> ModalFormula:
    """~(s & [m](s -> <m>(~s & t & <m>(~s & ~t & <m>s)))) with s = p0, t = p1."""
    m, s, t = modality, p(0), p(1)
    inner = Dia(m, And(And(Not(s), Not(t)), Dia(m, s)))
    middle = Dia(m, And(And(Not(s), t), inner))
    return Not(And(s, box(m, Imp(s, middle))))


def formula_H_circ(modality: str = "d") -> ModalFormula:
    return circ_translate(formula_H(modality))


def _separator_parts(i: int, atom: int, modality: str) -> Tuple[ModalFormula, ModalFormula]:
    sep = separator(i, atom, modality)
    return sep.left, sep.right


def _with_separator(axiom: ModalFormula, i: int, atom: int, modality: str) -> ModalFormula:
    first, second = _separator_parts(i, atom, modality)
    return Or(Or(axiom, first), second)


def psi(i: int, n: int, modality: str = "d") -> ModalFormula:
    return _with_separator(axiom_I(n, modality), i, n + 1, modality)


def xi(i: int, modality: str = "d") -> ModalFormula:
    return _with_separator(axiom_5n(2, modality), i, 1, modality)


def zeta(i: int, n: int, modality: str = "d") -> ModalFormula:
    return _with_separator(axiom_U(n, modality), i, n + 1, modality)


FORMULA_FAMILIES: Dict[str, Tuple[Callable[..., ModalFormula], Tuple[str, ...]]] = {
    "alpha": (alpha, ("i",)),
    "phi": (phi, ("i",)),
    "psi": (psi, ("i", "n")),
    "xi": (xi, ("i",)),
    "zeta": (zeta, ("i", "n")),
    "5n": (axiom_5n, ("n",)),
    "U": (axiom_U, ("n",)),
    "Ualt": (axiom_U_alt, ("n",)),
    "I": (axiom_I, ("n",)),
    "4": (axiom_4, ()),
    "T": (axiom_T, ()),
    "Grz": (axiom_Grz, ()),
    "M": (axiom_M, ()),
    "Q": (axiom_Q, ()),
    "H": (formula_H, ()),
    "Hcirc": (formula_H_circ, ()),
}


def gen_formula(name: str, params: Sequence[int] = ()) -> ModalFormula:
    try:
        builder, names = FORMULA_FAMILIES[name]
    except KeyError:
        known = ", ".join(FORMULA_FAMILIES)
        raise BadParameter(f"unknown formula family '{name}' (known: {known})") from None
    if len(params) != len(names):
        raise BadParameter(f"{name} takes parameters ({', '.join(names)}), got {len(params)}")
    return builder(*params)


# Models


def fine_model(n: int) -> Model:
    """p0 on even d-points, p1 on odd d-points, both false on every a-, b- and c-point."""
    frame = fine_frame(n)
    return Model(
        frame,
        {
            0: frozenset(f"d{i}" for i in range(0, n, 2)),
            1: frozenset(f"d{i}" for i in range(1, n, 2)),
        },
    )


# ---------------------------------------------------------------------------
# Enumeration and sampling


def all_frames(n: int, sig: Signature = MONO) -> Iterator[Frame]:
    """Every one-relation frame on worlds "0".."n-1"; row x of the relation is bits x*n..x*n+n-1 of the code."""
    _require(n >= 1, f"need at least one world, got {n}")
    _require(len(sig) == 1, "exhaustive enumeration covers one modality")
    worlds = tuple(str(i) for i in range(n))
    full = (1 << n) - 1
    for code in range(1 << (n * n)):
        succ = tuple((code >> (x * n)) & full for x in range(n))
        yield Frame(sig, worlds, (succ,))


def random_frame(rng: np.random.Generator, n: int, density: float = 0.4, sig: Signature = MONO) -> Frame:
    worlds = tuple(str(i) for i in range(n))
    relations = []
    for _ in sig.modalities:
        matrix = rng.random((n, n)) < density
        relations.append(tuple(int(sum(1 << j for j in np.flatnonzero(row))) for row in matrix))
    return Frame(sig, worlds, tuple(relations))


def random_model(rng: np.random.Generator, n: int, atoms: int = 2, density: float = 0.4) -> Model:
    frame = random_frame(rng, n, density)
    valuation = {
        a: frozenset(frame.worlds[i] for i in np.flatnonzero(rng.random(n) < 0.5)) for a in range(atoms)
    }
    return Model(frame, valuation)


_LEAVES = ("top", "bot", "atom")
_NODES = ("not", "dia", "box", "and", "or", "imp", "iff")


def random_formula(
    rng: np.random.Generator,
    depth: int,
    atoms: int = 2,
    modalities: Sequence[str] = ("d",),
) -> ModalFormula:
    """Random formula of syntactic depth <= depth over atoms p0..p(atoms-1)."""
    if depth <= 0 or rng.random() < 0.2:
        kind = _LEAVES[int(rng.integers(len(_LEAVES)))] if rng.random() < 0.3 else "atom"
        if kind == "top":
            return Top()
        if kind == "bot":
            return Bot()
        return Atom(int(rng.integers(atoms)))
    kind = _NODES[int(rng.integers(len(_NODES)))]
    if kind in ("dia", "box"):
        modality = modalities[int(rng.integers(len(modalities)))]
        child = random_formula(rng, depth - 1, atoms, modalities)
        return Dia(modality, child) if kind == "dia" else box(modality, child)
    if kind == "not":
        return Not(random_formula(rng, depth - 1, atoms, modalities))
    left = random_formula(rng, depth - 1, atoms, modalities)
    right = random_formula(rng, depth - 1, atoms, modalities)
    return {"and": And, "or": Or, "imp": Imp, "iff": Iff}[kind](left, right)


def formula_pool(seed: int, size: int, max_modal_depth: int, atoms: int = 2) -> List[ModalFormula]:
    """`size` distinct random formulas of modal depth <= max_modal_depth, reproducible from `seed`."""
    rng = np.random.default_rng(seed)
    pool: List[ModalFormula] = []
    seen = set()
    while len(pool) < size:
        candidate = random_formula(rng, max_modal_depth + 2, atoms)
        if modal_depth(candidate) <= max_modal_depth and candidate not in seen:
            seen.add(candidate)
            pool.append(candidate)
    return pool
