"""Model checking and brute-force frame validity.

Valuations of the atoms occurring in a formula are numbered by an integer
code: bit ``a * n + w`` of the code is set when the ``a``-th atom (in
ascending index order) is true at world ``w`` (frame order). Codes are
enumerated in ascending order and evaluated in numpy batches, so the first
refuting (valuation, world) pair is always the same for the same input.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from itertools import product
from typing import Dict, FrozenSet, Iterator, Mapping, Optional, Sequence

import numpy as np

from .config import SemanticsConfig
from .errors import BudgetExceeded
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
    Top,
    atoms_of,
    check_signature,
    substitute,
)
from .frames import Frame, Model, bits

logger = logging.getLogger(__name__)

DEFAULT_BUDGET = SemanticsConfig().budget


@dataclass(frozen=True)
class Witness:
    valuation: Mapping[int, FrozenSet[str]]
    world: str

    def describe(self) -> str:
        parts = [
            f"p{atom}={{{','.join(sorted(worlds))}}}" for atom, worlds in sorted(self.valuation.items())
        ]
        return f"world {self.world} under " + (" ".join(parts) or "the empty valuation")


@dataclass(frozen=True)
class ValidityVerdict:
    valid: bool
    witness: Optional[Witness] = None


@dataclass(frozen=True)
class SatisfiabilityVerdict:
    satisfiable: bool
    witness: Optional[Witness] = None


@dataclass(frozen=True)
class InstanceVerdict:
    """Outcome of a bounded strong-verification check."""

    verified: bool
    instances: int
    substitution: Optional[Mapping[int, ModalFormula]] = None
    world: Optional[str] = None


# ---------------------------------------------------------------------------
# Single models


def _preimage(rel: Sequence[int], mask: int) -> int:
    out = 0
    for x, succ in enumerate(rel):
        if succ & mask:
            out |= 1 << x
    return out


def _truth_mask(model: Model, formula: ModalFormula, full: int, cache: Dict[ModalFormula, int]) -> int:
    if formula in cache:
        return cache[formula]
    if isinstance(formula, Top):
        value = full
    elif isinstance(formula, Bot):
        value = 0
    elif isinstance(formula, Atom):
        value = model.mask(formula.index)
    elif isinstance(formula, Not):
        value = full & ~_truth_mask(model, formula.child, full, cache)
    elif isinstance(formula, Dia):
        inner = _truth_mask(model, formula.child, full, cache)
        value = _preimage(model.frame.succ(formula.modality), inner)
    else:
        left = _truth_mask(model, formula.left, full, cache)
        right = _truth_mask(model, formula.right, full, cache)
        if isinstance(formula, And):
            value = left & right
        elif isinstance(formula, Or):
            value = left | right
        elif isinstance(formula, Imp):
            value = (full & ~left) | right
        elif isinstance(formula, Iff):
            value = full & ~(left ^ right)
        else:
            raise TypeError(f"not a modal formula: {formula!r}")
    cache[formula] = value
    return value


def truth_mask(model: Model, formula: ModalFormula) -> int:
    check_signature(formula, model.frame.sig)
    return _truth_mask(model, formula, model.frame.full_mask, {})


def truth_set(model: Model, formula: ModalFormula) -> FrozenSet[str]:
    return model.frame.names(truth_mask(model, formula))


def satisfies(model: Model, world: str, formula: ModalFormula) -> bool:
    index = model.frame.index(world)
    return bool(truth_mask(model, formula) >> index & 1)


def verifies(model: Model, formula: ModalFormula) -> bool:
    return truth_mask(model, formula) == model.frame.full_mask


def verifies_instances(
    model: Model,
    formula: ModalFormula,
    pool: Sequence[ModalFormula],
    budget: int = DEFAULT_BUDGET,
) -> InstanceVerdict:
    """Check that `model` verifies every instance of `formula` with atoms drawn from `pool`.

    Substitutions are enumerated as a product over the formula's atoms in
    ascending order, each ranging over `pool` in the given order.
    """
    atoms = sorted(atoms_of(formula))
    total = len(pool) ** len(atoms)
    evaluations = total * model.frame.size
    if evaluations > budget:
        raise BudgetExceeded(len(atoms), evaluations, budget)
    logger.debug("checking %d substitution instances of %s", total, formula)
    for images in product(pool, repeat=len(atoms)):
        mapping = dict(zip(atoms, images))
        mask = truth_mask(model, substitute(formula, mapping))
        if mask != model.frame.full_mask:
            missing = model.frame.full_mask & ~mask
            return InstanceVerdict(False, total, mapping, model.frame.worlds[bits(missing)[0]])
    return InstanceVerdict(True, total)


# ---------------------------------------------------------------------------
# Frames: vectorised enumeration of valuations


class _BatchEvaluator:
    """Evaluate a formula for a batch of valuation codes at once; rows are valuations."""

    def __init__(self, frame: Frame, atoms: Sequence[int]):
        self.frame = frame
        self.n = frame.size
        self.positions = {atom: k for k, atom in enumerate(atoms)}
        self.transposed = {
            m: frame.matrix(m).T.astype(np.int32) for m in frame.sig.modalities
        }
        self.shifts = np.arange(self.n, dtype=np.int64)

    def evaluate(self, formula: ModalFormula, codes: np.ndarray) -> np.ndarray:
        return self._eval(formula, codes, {})

    def _eval(self, formula: ModalFormula, codes: np.ndarray, cache: Dict[ModalFormula, np.ndarray]) -> np.ndarray:
        if formula in cache:
            return cache[formula]
        shape = (codes.shape[0], self.n)
        if isinstance(formula, Top):
            value = np.ones(shape, dtype=bool)
        elif isinstance(formula, Bot):
            value = np.zeros(shape, dtype=bool)
        elif isinstance(formula, Atom):
            offset = self.positions[formula.index] * self.n
            value = ((codes[:, None] >> (self.shifts + offset)) & 1).astype(bool)
        elif isinstance(formula, Not):
            value = ~self._eval(formula.child, codes, cache)
        elif isinstance(formula, Dia):
            inner = self._eval(formula.child, codes, cache).astype(np.int32)
            value = (inner @ self.transposed[formula.modality]) > 0
        else:
            left = self._eval(formula.left, codes, cache)
            right = self._eval(formula.right, codes, cache)
            if isinstance(formula, And):
                value = left & right
            elif isinstance(formula, Or):
                value = left | right
            elif isinstance(formula, Imp):
                value = ~left | right
            elif isinstance(formula, Iff):
                value = left == right
            else:
                raise TypeError(f"not a modal formula: {formula!r}")
        cache[formula] = value
        return value


def _decode(frame: Frame, atoms: Sequence[int], code: int) -> Dict[int, FrozenSet[str]]:
    n = frame.size
    return {atom: frame.names((code >> (k * n)) & frame.full_mask) for k, atom in enumerate(atoms)}


def _batches(total: int, batch_size: int) -> Iterator[np.ndarray]:
    for start in range(0, total, batch_size):
        yield np.arange(start, min(start + batch_size, total), dtype=np.int64)


def _scan(
    frame: Frame,
    formula: ModalFormula,
    columns: Sequence[int],
    budget: int,
    want: bool,
    batch_size: int,
) -> Optional[Witness]:
    """First (valuation, world) in canonical order where the formula's truth equals `want`."""
    check_signature(formula, frame.sig)
    atoms = sorted(atoms_of(formula))
    required_bits = len(atoms) * frame.size
    total = 1 << required_bits
    evaluations = total * len(columns)
    # codes are int64 rows
    if evaluations > budget or required_bits > 62:
        raise BudgetExceeded(required_bits, evaluations, budget)
    logger.debug("enumerating %d valuations over %d worlds for %s", total, len(columns), formula)
    evaluator = _BatchEvaluator(frame, atoms)
    cols = np.asarray(columns, dtype=np.int64)
    for codes in _batches(total, batch_size):
        truth = evaluator.evaluate(formula, codes)[:, cols]
        hits = truth if want else ~truth
        if hits.any():
            row, col = np.argwhere(hits)[0]
            code = int(codes[row])
            return Witness(_decode(frame, atoms, code), frame.worlds[int(cols[col])])
    return None


def valid_on_frame(
    frame: Frame,
    formula: ModalFormula,
    budget: int = DEFAULT_BUDGET,
    batch_size: int = SemanticsConfig().batch_size,
) -> ValidityVerdict:
    witness = _scan(frame, formula, range(frame.size), budget, False, batch_size)
    return ValidityVerdict(witness is None, witness)


def valid_at_point(
    frame: Frame,
    world: str,
    formula: ModalFormula,
    budget: int = DEFAULT_BUDGET,
    batch_size: int = SemanticsConfig().batch_size,
) -> ValidityVerdict:
    witness = _scan(frame, formula, [frame.index(world)], budget, False, batch_size)
    return ValidityVerdict(witness is None, witness)


def satisfiable_in_frame(
    frame: Frame,
    formula: ModalFormula,
    budget: int = DEFAULT_BUDGET,
    batch_size: int = SemanticsConfig().batch_size,
) -> SatisfiabilityVerdict:
    witness = _scan(frame, formula, range(frame.size), budget, True, batch_size)
    return SatisfiabilityVerdict(witness is not None, witness)


def satisfying_worlds(frame: Frame, formula: ModalFormula, budget: int = DEFAULT_BUDGET) -> FrozenSet[str]:
    """Worlds where `formula` holds under some valuation."""
    check_signature(formula, frame.sig)
    atoms = sorted(atoms_of(formula))
    required_bits = len(atoms) * frame.size
    total = 1 << required_bits
    if total * frame.size > budget:
        raise BudgetExceeded(required_bits, total * frame.size, budget)
    evaluator = _BatchEvaluator(frame, atoms)
    seen = np.zeros(frame.size, dtype=bool)
    for codes in _batches(total, SemanticsConfig().batch_size):
        seen |= evaluator.evaluate(formula, codes).any(axis=0)
    return frozenset(frame.worlds[i] for i in np.flatnonzero(seen))


def constant_truth_set(frame: Frame, formula: ModalFormula) -> FrozenSet[str]:
    """Truth set of a formula under the empty valuation (exact for constant formulas)."""
    return truth_set(Model(frame), formula)

