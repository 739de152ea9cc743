"""Canonical JSON form of witnesses and certificates."""

from __future__ import annotations

import json
from typing import Any, Dict, Optional

from group_core.context import GroupCtx
from group_core.errors import CertificateFormatError, F2SumsetError
from group_core.literals import format_set_literal, parse_set_literal
from group_core.sets import SetF2
from group_core.subgroups import Subgroup

from .certificates import Certificate, NodeKind
from .elementary import ElementaryType, ElementaryWitness


def witness_to_dict(w: ElementaryWitness) -> Dict[str, Any]:
    kind = ElementaryType(w.type)
    if kind is ElementaryType.I:
        return {"type": kind.value, "side": w.side}
    if kind is ElementaryType.II:
        return {
            "type": kind.value,
            "d": w.d,
            "anchor_a": w.anchor_a,
            "anchor_b": w.anchor_b,
            "length_a": w.length_a,
            "length_b": w.length_b,
        }
    return {
        "type": kind.value,
        "g1": w.g1,
        "g2": w.g2,
        "H_basis": list(w.subgroup.basis),
        "H1": format_set_literal(w.h1),
        "H2": format_set_literal(w.h2),
        "c": w.c,
    }


def _int(data: Dict[str, Any], key: str) -> int:
    value = data.get(key)
    if isinstance(value, bool) or not isinstance(value, int):
        raise CertificateFormatError(f"field {key!r} must be an integer, got {value!r}")
    return value


def _set(data: Dict[str, Any], key: str, rank: int) -> SetF2:
    text = data.get(key)
    if not isinstance(text, str):
        raise CertificateFormatError(f"field {key!r} must be a set literal")
    value = parse_set_literal(text)
    if value.ctx.rank != rank:
        raise CertificateFormatError(f"field {key!r} lives in F_2^{value.ctx.rank}, expected F_2^{rank}")
    return value


def _subgroup(data: Dict[str, Any], key: str, rank: int) -> Subgroup:
    basis = data.get(key)
    if not isinstance(basis, list):
        raise CertificateFormatError(f"field {key!r} must be a list of elements")
    return Subgroup(GroupCtx(rank), [_int({"v": v}, "v") for v in basis])


def witness_from_dict(data: Dict[str, Any], rank: int) -> ElementaryWitness:
    """Decode a witness for a pair in F_2^rank."""
    try:
        kind = ElementaryType(data["type"])
        if kind is ElementaryType.I:
            side = data.get("side")
            if side not in ("A", "B"):
                raise CertificateFormatError(f"type I side must be 'A' or 'B', got {side!r}")
            return ElementaryWitness(kind, side=side)
        if kind is ElementaryType.II:
            return ElementaryWitness(
                kind,
                d=_int(data, "d"),
                anchor_a=_int(data, "anchor_a"),
                anchor_b=_int(data, "anchor_b"),
                length_a=_int(data, "length_a"),
                length_b=_int(data, "length_b"),
            )
        c: Optional[int] = None if data.get("c") is None else _int(data, "c")
        return ElementaryWitness(
            kind,
            g1=_int(data, "g1"),
            g2=_int(data, "g2"),
            subgroup=_subgroup(data, "H_basis", rank),
            h1=_set(data, "H1", rank),
            h2=_set(data, "H2", rank),
            c=c,
        )
    except CertificateFormatError:
        raise
    except (KeyError, TypeError, AttributeError, F2SumsetError, ValueError) as exc:
        raise CertificateFormatError(f"malformed witness: {exc}") from exc


def certificate_to_dict(c: Certificate) -> Dict[str, Any]:
    kind = NodeKind(c.kind)
    if kind is NodeKind.ELEMENTARY:
        return {"kind": kind.value, "rank": c.rank, "witness": witness_to_dict(c.witness)}
    if kind is NodeKind.DEPERIODIZE:
        return {
            "kind": kind.value,
            "rank": c.rank,
            "H_basis": list(c.subgroup.basis),
            "child": certificate_to_dict(c.child),
        }
    return {
        "kind": kind.value,
        "rank": c.rank,
        "F_basis": list(c.subgroup.basis),
        "A0": format_set_literal(c.a0),
        "B0": format_set_literal(c.b0),
        "witness": witness_to_dict(c.witness),
        "child": certificate_to_dict(c.child),
    }


def certificate_from_dict(data: Dict[str, Any]) -> Certificate:
    if not isinstance(data, dict):
        raise CertificateFormatError("a certificate node must be a JSON object")
    try:
        kind = NodeKind(data["kind"])
        rank = _int(data, "rank")
        if kind is NodeKind.ELEMENTARY:
            return Certificate(kind, rank, witness=witness_from_dict(data["witness"], rank))
        if kind is NodeKind.DEPERIODIZE:
            h = _subgroup(data, "H_basis", rank)
            return Certificate(kind, rank, subgroup=h, child=certificate_from_dict(data["child"]))
        f = _subgroup(data, "F_basis", rank)
        return Certificate(
            kind,
            rank,
            subgroup=f,
            a0=_set(data, "A0", rank),
            b0=_set(data, "B0", rank),
            witness=witness_from_dict(data["witness"], rank - f.dim),
            child=certificate_from_dict(data["child"]),
        )
    except CertificateFormatError:
        raise
    except (KeyError, TypeError, AttributeError, F2SumsetError, ValueError) as exc:
        raise CertificateFormatError(f"malformed certificate node: {exc}") from exc


def dumps_certificate(c: Certificate, indent: Optional[int] = None) -> str:
    return json.dumps(certificate_to_dict(c), sort_keys=True, indent=indent)


def loads_certificate(text: str) -> Certificate:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CertificateFormatError(f"certificate is not valid JSON: {exc}") from exc
    return certificate_from_dict(data)
