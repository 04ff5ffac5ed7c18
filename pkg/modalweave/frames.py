"""Finite Kripke frames and models, relation utilities, widths and derived frames.

Relations are stored per modality as a tuple of successor bit-sets: bit ``j``
of ``relations[k][i]`` is set when world ``i`` sees world ``j`` along the
``k``-th modality of the signature. Every operation returns new values.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations, permutations
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from .errors import BadParameter, UnknownWorld
from .formula import Signature

logger = logging.getLogger(__name__)

Pair = Tuple[str, str]


def bits(mask: int) -> List[int]:
    """Indices of the set bits of `mask`, ascending."""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


@dataclass(frozen=True)
class Frame:
    sig: Signature
    worlds: Tuple[str, ...]
    relations: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "worlds", tuple(self.worlds))
        object.__setattr__(self, "relations", tuple(tuple(rel) for rel in self.relations))
        if len(set(self.worlds)) != len(self.worlds):
            raise BadParameter("world names must be unique")
        if len(self.relations) != len(self.sig.modalities):
            raise BadParameter("one relation per modality is required")
        limit = 1 << len(self.worlds)
        for rel in self.relations:
            if len(rel) != len(self.worlds) or any(mask < 0 or mask >= limit for mask in rel):
                raise BadParameter("relation pairs must range over the frame's worlds")

    @classmethod
    def from_pairs(
        cls,
        sig: Signature,
        worlds: Sequence[str],
        pairs: Mapping[str, Iterable[Pair]],
    ) -> "Frame":
        worlds = tuple(worlds)
        position = {name: i for i, name in enumerate(worlds)}
        relations = []
        for modality in sig.modalities:
            succ = [0] * len(worlds)
            for x, y in pairs.get(modality, ()):
                if x not in position:
                    raise UnknownWorld(x)
                if y not in position:
                    raise UnknownWorld(y)
                succ[position[x]] |= 1 << position[y]
            relations.append(tuple(succ))
        for modality in pairs:
            sig.require(modality)
        return cls(sig, worlds, tuple(relations))

    @cached_property
    def _positions(self) -> Dict[str, int]:
        return {name: i for i, name in enumerate(self.worlds)}

    @property
    def size(self) -> int:
        return len(self.worlds)

    @property
    def full_mask(self) -> int:
        return (1 << len(self.worlds)) - 1

    def index(self, world: str) -> int:
        try:
            return self._positions[world]
        except KeyError:
            raise UnknownWorld(world) from None

    def mask_of(self, worlds: Iterable[str]) -> int:
        mask = 0
        for world in worlds:
            mask |= 1 << self.index(world)
        return mask

    def names(self, mask: int) -> FrozenSet[str]:
        return frozenset(self.worlds[i] for i in bits(mask))

    def ordered(self, mask: int) -> Tuple[str, ...]:
        return tuple(self.worlds[i] for i in bits(mask))

    def succ(self, modality: str) -> Tuple[int, ...]:
        return self.relations[self.sig.modalities.index(self.sig.require(modality))]

    def pairs(self, modality: str) -> List[Pair]:
        rel = self.succ(modality)
        return [(self.worlds[i], self.worlds[j]) for i, mask in enumerate(rel) for j in bits(mask)]

    def related(self, modality: str, x: str, y: str) -> bool:
        return bool(self.succ(modality)[self.index(x)] >> self.index(y) & 1)

    def matrix(self, modality: str) -> np.ndarray:
        """Boolean adjacency matrix M with M[x, y] = R x y."""
        n = len(self.worlds)
        rel = self.succ(modality)
        out = np.zeros((n, n), dtype=bool)
        for i, mask in enumerate(rel):
            out[i, bits(mask)] = True
        return out

    def with_relation(self, modality: str, succ: Sequence[int]) -> "Frame":
        position = self.sig.modalities.index(self.sig.require(modality))
        relations = list(self.relations)
        relations[position] = tuple(succ)
        return Frame(self.sig, self.worlds, tuple(relations))


@dataclass(frozen=True)
class Model:
    """A frame plus a valuation; atoms missing from the valuation are false everywhere."""

    frame: Frame
    valuation: Mapping[int, FrozenSet[str]] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for atom, worlds in self.valuation.items():
            worlds = frozenset(worlds)
            for world in worlds:
                self.frame.index(world)
            clean[int(atom)] = worlds
        object.__setattr__(self, "valuation", clean)

    def mask(self, atom: int) -> int:
        return self.frame.mask_of(self.valuation.get(atom, ()))


# ---------------------------------------------------------------------------
# Futures, composites and derived relations


def future(frame: Frame, modality: str, x: str) -> FrozenSet[str]:
    return frame.names(frame.succ(modality)[frame.index(x)])


def image(frame: Frame, modality: str, mask: int) -> int:
    """Union of the futures of the worlds in `mask`."""
    rel = frame.succ(modality)
    out = 0
    for i in bits(mask):
        out |= rel[i]
    return out


def compose_Rs(frame: Frame, path: Sequence[str], x: str) -> FrozenSet[str]:
    mask = 1 << frame.index(x)
    for modality in path:
        mask = image(frame, modality, mask)
    return frame.names(mask)


def proper_future(frame: Frame, modality: str, y: str) -> FrozenSet[str]:
    """{z : R y z and not R z y}."""
    rel = frame.succ(modality)
    i = frame.index(y)
    mask = 0
    for j in bits(rel[i]):
        if not rel[j] >> i & 1:
            mask |= 1 << j
    return frame.names(mask)


def overline(frame: Frame, modality: str) -> Frame:
    """The frame carrying R̄ (R̄xy iff R(y) ⊆ R(x)) in place of R_m."""
    rel = frame.succ(modality)
    succ = []
    for x_mask in rel:
        row = 0
        for j, y_mask in enumerate(rel):
            if y_mask & ~x_mask == 0:
                row |= 1 << j
        succ.append(row)
    return frame.with_relation(modality, succ)


def reflexive_closure(frame: Frame) -> Frame:
    relations = tuple(
        tuple(mask | (1 << i) for i, mask in enumerate(rel)) for rel in frame.relations
    )
    return Frame(frame.sig, frame.worlds, relations)


def _closure_masks(rel: Sequence[int]) -> Tuple[int, ...]:
    n = len(rel)
    reach = np.zeros((n, n), dtype=bool)
    for i, mask in enumerate(rel):
        reach[i, bits(mask)] = True
    for k in range(n):
        reach |= np.outer(reach[:, k], reach[k, :])
    return tuple(int(sum(1 << j for j in np.flatnonzero(row))) for row in reach)


def transitive_closure(frame: Frame) -> Frame:
    relations = tuple(_closure_masks(rel) for rel in frame.relations)
    return Frame(frame.sig, frame.worlds, relations)


def restrict(frame: Frame, worlds: Iterable[str]) -> Frame:
    """The subframe on `worlds`, keeping the original world order."""
    keep_mask = frame.mask_of(worlds)
    kept = bits(keep_mask)
    renumber = {old: new for new, old in enumerate(kept)}
    relations = []
    for rel in frame.relations:
        succ = []
        for old in kept:
            row = 0
            for j in bits(rel[old] & keep_mask):
                row |= 1 << renumber[j]
            succ.append(row)
        relations.append(tuple(succ))
    return Frame(frame.sig, tuple(frame.worlds[i] for i in kept), tuple(relations))


def reachable_mask(frame: Frame, x: str) -> int:
    seen = 1 << frame.index(x)
    frontier = seen
    while frontier:
        step = 0
        for rel in frame.relations:
            for i in bits(frontier):
                step |= rel[i]
        frontier = step & ~seen
        seen |= frontier
    return seen


def generated_subframe(frame: Frame, w: str) -> Frame:
    return restrict(frame, frame.ordered(reachable_mask(frame, w)))


def roots(frame: Frame) -> Tuple[str, ...]:
    return tuple(w for w in frame.worlds if reachable_mask(frame, w) == frame.full_mask)


def is_rooted(frame: Frame) -> bool:
    return bool(roots(frame))


def frames_isomorphic(left: Frame, right: Frame, max_worlds: int = 8) -> bool:
    """Brute-force isomorphism over world bijections (same signature order)."""
    if left.sig != right.sig or left.size != right.size:
        return False
    if left.size > max_worlds:
        raise BadParameter(f"isomorphism search is limited to {max_worlds} worlds")
    degree_left = sorted(tuple(bin(mask).count("1") for mask in rel) for rel in zip(*left.relations))
    degree_right = sorted(tuple(bin(mask).count("1") for mask in rel) for rel in zip(*right.relations))
    if degree_left != degree_right:
        return False
    n = left.size
    for perm in permutations(range(n)):
        if all(
            _mapped(mask, perm) == rel_r[perm[i]]
            for rel_l, rel_r in zip(left.relations, right.relations)
            for i, mask in enumerate(rel_l)
        ):
            return True
    return False


def _mapped(mask: int, perm: Sequence[int]) -> int:
    out = 0
    for j in bits(mask):
        out |= 1 << perm[j]
    return out


# ---------------------------------------------------------------------------
# Widths


def _max_clique(nodes: Sequence[int], adjacent) -> List[int]:
    graph = nx.Graph()
    graph.add_nodes_from(nodes)
    graph.add_edges_from((a, b) for a, b in combinations(nodes, 2) if adjacent(a, b))
    if graph.number_of_nodes() == 0:
        return []
    clique, _ = nx.max_weight_clique(graph, weight=None)
    return sorted(clique)


def first_clique(nodes: Sequence[int], adjacent, k: int) -> Optional[Tuple[int, ...]]:
    """Lexicographically first k-clique of `nodes` (in the given order), if any."""
    nodes = list(nodes)

    def extend(chosen: Tuple[int, ...], start: int) -> Optional[Tuple[int, ...]]:
        if len(chosen) == k:
            return chosen
        for pos in range(start, len(nodes) - (k - len(chosen)) + 1):
            node = nodes[pos]
            if all(adjacent(node, other) for other in chosen):
                found = extend(chosen + (node,), pos + 1)
                if found is not None:
                    return found
        return None

    return extend((), 0) if k >= 0 else None


def unrelated(rel: Sequence[int]):
    """Adjacency for R-antichains: neither world sees the other."""
    return lambda a, b: not (rel[a] >> b & 1) and not (rel[b] >> a & 1)


def incomparable(rel: Sequence[int]):
    """Adjacency for achronal sets: the futures are ⊆-incomparable."""
    return lambda a, b: bool(rel[a] & ~rel[b]) and bool(rel[b] & ~rel[a])


def antichain_width(frame: Frame, modality: str, worlds: Iterable[str]) -> int:
    rel = frame.succ(modality)
    return len(_max_clique(bits(frame.mask_of(worlds)), unrelated(rel)))


def achronal_width(frame: Frame, modality: str, worlds: Iterable[str]) -> int:
    rel = frame.succ(modality)
    return len(_max_clique(bits(frame.mask_of(worlds)), incomparable(rel)))


def achronal_width_bruteforce(frame: Frame, modality: str, worlds: Iterable[str]) -> int:
    """Largest achronal subset, by subset enumeration (small sets only)."""
    rel = frame.succ(modality)
    members = bits(frame.mask_of(worlds))
    adjacent = incomparable(rel)
    for k in range(len(members), 1, -1):
        for subset in combinations(members, k):
            if all(adjacent(a, b) for a, b in combinations(subset, 2)):
                return k
    return min(len(members), 1)


def image_antichain_size(frame: Frame, modality: str, worlds: Iterable[str]) -> int:
    """Largest |R[Y]| over Y ⊆ S with R[Y] a ⊆-antichain of future sets."""
    rel = frame.succ(modality)
    members = bits(frame.mask_of(worlds))
    best = 0
    for k in range(len(members) + 1):
        for subset in combinations(members, k):
            family = {rel[i] for i in subset}
            if len(family) <= best:
                continue
            if all(a & ~b and b & ~a for a, b in combinations(family, 2)):
                best = len(family)
    return best


def inclusion_width(frame: Frame, modality: str, worlds: Iterable[str]) -> int:
    """⊆-width of the family R[S] of future sets."""
    rel = frame.succ(modality)
    family = sorted({rel[i] for i in bits(frame.mask_of(worlds))})
    clique = _max_clique(
        list(range(len(family))),
        lambda a, b: bool(family[a] & ~family[b]) and bool(family[b] & ~family[a]),
    )
    return len(clique)
