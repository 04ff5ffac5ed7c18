"""JSON documents for frames, models and finite algebras."""

from __future__ import annotations

import json
import re
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, ValidationError

from .algebra import FiniteBAO
from .errors import FileFormatError, WorkbenchError
from .formula import Signature
from .frames import Frame, Model, bits

_ATOM_KEY = re.compile(r"p([0-9]+)")


class FrameDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    modalities: List[str]
    worlds: List[str]
    relations: Dict[str, List[Tuple[str, str]]] = {}
    valuation: Optional[Dict[str, List[str]]] = None


class AlgebraDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    modalities: List[str]
    atoms: List[str]
    op: Dict[str, Dict[str, List[str]]] = {}


def _read_json(path: Union[str, Path]) -> object:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise FileFormatError(f"cannot read {path}: {exc.strerror or exc}") from None
    except json.JSONDecodeError as exc:
        raise FileFormatError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None


def _validated(model_cls, payload: object, source: str):
    try:
        return model_cls.model_validate(payload)
    except ValidationError as exc:
        first = exc.errors()[0]
        where = ".".join(str(part) for part in first["loc"]) or "document"
        raise FileFormatError(f"{source}: {where}: {first['msg']}") from None


def _atom_index(key: str) -> int:
    match = _ATOM_KEY.fullmatch(key)
    if match is None:
        raise FileFormatError(f"valuation key '{key}' is not an atom name like p0")
    return int(match.group(1))


def model_from_document(payload: object, source: str = "<document>") -> Model:
    """Build a model; a document without "valuation" gives the empty valuation."""
    doc = _validated(FrameDocument, payload, source)
    try:
        sig = Signature(tuple(doc.modalities))
        frame = Frame.from_pairs(sig, doc.worlds, doc.relations)
        valuation = {
            _atom_index(key): frozenset(worlds) for key, worlds in (doc.valuation or {}).items()
        }
        return Model(frame, valuation)
    except FileFormatError:
        raise
    except WorkbenchError as exc:
        raise FileFormatError(f"{source}: {exc}") from None


def load_model(path: Union[str, Path]) -> Model:
    return model_from_document(_read_json(path), str(path))


def load_frame(path: Union[str, Path]) -> Frame:
    return load_model(path).frame


def frame_to_document(frame: Frame, valuation: Optional[Dict[int, frozenset]] = None) -> dict:
    doc = {
        "modalities": list(frame.sig.modalities),
        "worlds": list(frame.worlds),
        "relations": {m: [list(pair) for pair in frame.pairs(m)] for m in frame.sig.modalities},
    }
    if valuation is not None:
        order = {name: i for i, name in enumerate(frame.worlds)}
        doc["valuation"] = {
            f"p{atom}": sorted(worlds, key=order.__getitem__) for atom, worlds in sorted(valuation.items())
        }
    return doc


def save_frame(path: Union[str, Path], frame: Frame, valuation: Optional[Dict[int, frozenset]] = None) -> None:
    text = json.dumps(frame_to_document(frame, valuation), indent=2)
    try:
        Path(path).write_text(text + "\n", encoding="utf-8")
    except OSError as exc:
        raise FileFormatError(f"cannot write {path}: {exc.strerror or exc}") from None


def algebra_from_document(payload: object, source: str = "<document>") -> FiniteBAO:
    doc = _validated(AlgebraDocument, payload, source)
    try:
        sig = Signature(tuple(doc.modalities))
        position = {name: i for i, name in enumerate(doc.atoms)}
        if len(position) != len(doc.atoms):
            raise FileFormatError(f"{source}: atom names must be unique")
        ops = []
        for modality in sig.modalities:
            table = doc.op.get(modality, {})
            images = [0] * len(doc.atoms)
            for atom, image in table.items():
                if atom not in position:
                    raise FileFormatError(f"{source}: op.{modality}: unknown atom '{atom}'")
                for target in image:
                    if target not in position:
                        raise FileFormatError(f"{source}: op.{modality}.{atom}: unknown atom '{target}'")
                    images[position[atom]] |= 1 << position[target]
            ops.append(tuple(images))
        for modality in doc.op:
            sig.require(modality)
        return FiniteBAO(sig, tuple(doc.atoms), tuple(ops))
    except FileFormatError:
        raise
    except WorkbenchError as exc:
        raise FileFormatError(f"{source}: {exc}") from None


def load_algebra(path: Union[str, Path]) -> FiniteBAO:
    return algebra_from_document(_read_json(path), str(path))


def algebra_to_document(algebra: FiniteBAO) -> dict:
    return {
        "modalities": list(algebra.sig.modalities),
        "atoms": list(algebra.atoms),
        "op": {
            modality: {
                atom: [algebra.atoms[j] for j in bits(image)]
                for atom, image in zip(algebra.atoms, images)
            }
            for modality, images in zip(algebra.sig.modalities, algebra.ops)
        },
    }
