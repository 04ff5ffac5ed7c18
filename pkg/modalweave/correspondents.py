"""First-order frame conditions matching the workbench's axiom families.

Each checker scans worlds in frame order and reports the first
counterexample it meets, so reports are reproducible. Counterexamples are
ordered mappings from a variable label (``x``, ``y0``, ``z`` ...) to a world
name.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from itertools import combinations, product
from typing import Dict, List, Optional, Sequence

from .errors import BadParameter, NotPointGenerated
from .frames import (
    Frame,
    achronal_width,
    antichain_width,
    bits,
    first_clique,
    generated_subframe,
    image,
    incomparable,
    unrelated,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ConditionReport:
    holds: bool
    counterexample: Optional[Dict[str, str]] = None

    def describe(self) -> str:
        if self.holds:
            return "HOLDS"
        pairs = " ".join(f"{label}={world}" for label, world in (self.counterexample or {}).items())
        return f"FAILS {pairs}".rstrip()


HOLDS = ConditionReport(True)


def _fails(**labelled: str) -> ConditionReport:
    return ConditionReport(False, dict(labelled))


def _positive(name: str, n: int) -> None:
    if n < 1:
        raise BadParameter(f"{name} needs n >= 1, got {n}")


def _power_image(frame: Frame, modality: str, x: int, n: int) -> int:
    mask = 1 << x
    for _ in range(n):
        mask = image(frame, modality, mask)
    return mask


def check_5n(frame: Frame, n: int, modality: Optional[str] = None) -> ConditionReport:
    """R x y and R^n x z imply R y z."""
    if n < 0:
        raise BadParameter(f"5_n needs n >= 0, got {n}")
    modality = modality or frame.sig.default
    rel = frame.succ(modality)
    w = frame.worlds
    for x in range(frame.size):
        far = _power_image(frame, modality, x, n)
        for y in bits(rel[x]):
            missing = far & ~rel[y]
            if missing:
                return _fails(x=w[x], y=w[y], z=w[bits(missing)[0]])
    return HOLDS


def check_e52_upto(frame: Frame, max_n: int, modality: Optional[str] = None) -> ConditionReport:
    """R^n x y and R^(n+1) x z imply R y z, for every n <= max_n."""
    if max_n < 0:
        raise BadParameter(f"max_n must be >= 0, got {max_n}")
    modality = modality or frame.sig.default
    rel = frame.succ(modality)
    w = frame.worlds
    for n in range(max_n + 1):
        for x in range(frame.size):
            near = _power_image(frame, modality, x, n)
            far = image(frame, modality, near)
            for y in bits(near):
                missing = far & ~rel[y]
                if missing:
                    return _fails(n=str(n), x=w[x], y=w[y], z=w[bits(missing)[0]])
    return HOLDS


def _labelled_tuple(frame: Frame, x: int, ys: Sequence[int]) -> Dict[str, str]:
    out = {"x": frame.worlds[x]}
    out.update({f"y{i}": frame.worlds[y] for i, y in enumerate(ys)})
    return out


def check_Un(frame: Frame, n: int, dia: Optional[str] = None, black: Optional[str] = None) -> ConditionReport:
    """No black-achronal set with more than n points inside any dia-future."""
    _positive("U_n", n)
    dia = dia or frame.sig.default
    black = black or dia
    rel_dia, rel_black = frame.succ(dia), frame.succ(black)
    for x in range(frame.size):
        members = frame.ordered(rel_dia[x])
        if len(members) <= n or achronal_width(frame, black, members) <= n:
            continue
        clique = first_clique(bits(rel_dia[x]), incomparable(rel_black), n + 1)
        return ConditionReport(False, _labelled_tuple(frame, x, clique))
    return HOLDS


def check_Un_literal(frame: Frame, n: int, dia: Optional[str] = None, black: Optional[str] = None) -> ConditionReport:
    """The (n+1)-tuple quantifier form of the U_n correspondent, checked literally."""
    _positive("U_n", n)
    dia = dia or frame.sig.default
    black = black or dia
    rel_dia, rel_black = frame.succ(dia), frame.succ(black)
    for x in range(frame.size):
        for ys in product(bits(rel_dia[x]), repeat=n + 1):
            if not any(
                rel_black[ys[i]] & ~rel_black[ys[j]] == 0
                for i in range(n + 1)
                for j in range(n + 1)
                if i != j
            ):
                return ConditionReport(False, _labelled_tuple(frame, x, ys))
    return HOLDS


def check_Un_all(frame: Frame, n: int) -> ConditionReport:
    """U_n for every (dia, black) pair of the signature, in signature order."""
    for dia, black in product(frame.sig.modalities, repeat=2):
        report = check_Un(frame, n, dia, black)
        if not report.holds:
            labelled = {"dia": dia, "black": black}
            labelled.update(report.counterexample or {})
            return ConditionReport(False, labelled)
    return HOLDS


def check_In(frame: Frame, n: int, modality: Optional[str] = None) -> ConditionReport:
    """No R(x) contains an R-antichain with more than n points."""
    _positive("I_n", n)
    modality = modality or frame.sig.default
    rel = frame.succ(modality)
    for x in range(frame.size):
        members = frame.ordered(rel[x])
        if len(members) <= n or antichain_width(frame, modality, members) <= n:
            continue
        clique = first_clique(bits(rel[x]), unrelated(rel), n + 1)
        return ConditionReport(False, _labelled_tuple(frame, x, clique))
    return HOLDS


def check_chain(frame: Frame, modality: Optional[str] = None) -> ConditionReport:
    """All futures are pairwise comparable under inclusion."""
    modality = modality or frame.sig.default
    rel = frame.succ(modality)
    for x, y in combinations(range(frame.size), 2):
        if rel[x] & ~rel[y] and rel[y] & ~rel[x]:
            return _fails(x=frame.worlds[x], y=frame.worlds[y])
    return HOLDS


def proper_future_masks(frame: Frame, modality: str) -> List[int]:
    rel = frame.succ(modality)
    out = []
    for y, succ in enumerate(rel):
        out.append(sum(1 << z for z in bits(succ) if not rel[z] >> y & 1))
    return out


def check_WidStar(frame: Frame, n: int, modality: Optional[str] = None) -> ConditionReport:
    """Every R-antichain with more than n points in some R(x) has two points with the same proper future.

    A failure is an (n+1)-point antichain whose proper futures are pairwise
    distinct; larger antichains fail only if one of their (n+1)-subsets does.
    """
    _positive("Wid*_n", n)
    modality = modality or frame.sig.default
    rel = frame.succ(modality)
    proper = proper_future_masks(frame, modality)
    apart = unrelated(rel)
    for x in range(frame.size):
        clique = first_clique(
            bits(rel[x]), lambda a, b: apart(a, b) and proper[a] != proper[b], n + 1
        )
        if clique is not None:
            return ConditionReport(False, _labelled_tuple(frame, x, clique))
    return HOLDS


@dataclass(frozen=True)
class FrameProps:
    reflexive: bool
    transitive: bool
    symmetric: bool
    serial: bool
    euclidean: bool
    irreflexive: bool

    def as_dict(self) -> Dict[str, bool]:
        return dict(self.__dict__)


def frame_props(frame: Frame, modality: Optional[str] = None) -> FrameProps:
    modality = modality or frame.sig.default
    rel = frame.succ(modality)
    size = range(frame.size)
    return FrameProps(
        reflexive=all(rel[x] >> x & 1 for x in size),
        transitive=all(rel[y] & ~rel[x] == 0 for x in size for y in bits(rel[x])),
        symmetric=all(rel[y] >> x & 1 for x in size for y in bits(rel[x])),
        serial=all(rel[x] for x in size),
        euclidean=all(rel[x] & ~rel[y] == 0 for x in size for y in bits(rel[x])),
        irreflexive=not any(rel[x] >> x & 1 for x in size),
    )


class SegerbergClass(str, Enum):
    SINGLE_IRREFLEXIVE = "SingleIrreflexive"
    REFLEXIVE_COFINAL = "ReflexiveCofinal"
    NEITHER = "Neither"


def segerberg_classify(frame: Frame, world: str, modality: Optional[str] = None) -> SegerbergClass:
    """Classify a frame generated by `world`: one irreflexive point, or every point sees a reflexive point."""
    generated = generated_subframe(frame, world)
    if set(generated.worlds) != set(frame.worlds):
        raise NotPointGenerated(f"frame is not generated by world '{world}'")
    modality = modality or frame.sig.default
    rel = frame.succ(modality)
    loops = sum(1 << x for x in range(frame.size) if rel[x] >> x & 1)
    if frame.size == 1 and not loops:
        return SegerbergClass.SINGLE_IRREFLEXIVE
    if all(rel[x] & loops for x in range(frame.size)):
        return SegerbergClass.REFLEXIVE_COFINAL
    return SegerbergClass.NEITHER
