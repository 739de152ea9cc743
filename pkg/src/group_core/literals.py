"""Text form of sets: `n=<rank>; {e1,e2,...}` or `n=<rank>; mask=<hex>`."""

from __future__ import annotations

import re
from typing import List

from .context import GroupCtx
from .errors import F2SumsetError, LiteralParseError
from .sets import SetF2

_HEADER = re.compile(r"\s*n\s*=\s*(\d+)\s*;\s*")
_MASK = re.compile(r"mask\s*=\s*(0[xX][0-9a-fA-F]+|[0-9a-fA-F]+)\s*$")
_ELEMENT = re.compile(r"\s*(0[xX][0-9a-fA-F]+|\d+)\s*")


def parse_set_literal(text: str) -> SetF2:
    header = _HEADER.match(text)
    if header is None:
        raise LiteralParseError("expected 'n=<rank>;'", _first_non_space(text))
    try:
        ctx = GroupCtx(int(header.group(1)))
    except F2SumsetError as exc:
        raise LiteralParseError(str(exc), header.start(1)) from exc
    pos = header.end()

    mask = _MASK.match(text, pos)
    if mask is not None:
        digits = mask.group(1)
        value = int(digits, 16)
        if value >> ctx.order:
            raise LiteralParseError(f"mask has bits beyond 2^{ctx.rank} elements", mask.start(1))
        return SetF2.from_mask(ctx, value)

    if pos >= len(text) or text[pos] != "{":
        raise LiteralParseError("expected '{' or 'mask='", pos)
    pos += 1
    elements: List[int] = []
    if re.match(r"\s*}", text[pos:]):
        pos = text.index("}", pos) + 1
    else:
        while True:
            token = _ELEMENT.match(text, pos)
            if token is None:
                raise LiteralParseError("expected an element", pos)
            digits = token.group(1)
            value = int(digits, 16) if digits[:2] in ("0x", "0X") else int(digits)
            if value >= ctx.order:
                raise LiteralParseError(f"element {value} is outside F_2^{ctx.rank}", token.start(1))
            elements.append(value)
            pos = token.end()
            if pos < len(text) and text[pos] == ",":
                pos += 1
                continue
            if pos < len(text) and text[pos] == "}":
                pos += 1
                break
            raise LiteralParseError("expected ',' or '}'", pos)
    if text[pos:].strip():
        raise LiteralParseError("unexpected trailing text", pos + len(text[pos:]) - len(text[pos:].lstrip()))
    return SetF2.from_elements(ctx, elements)


def format_set_literal(a: SetF2, compact: bool = False) -> str:
    if compact:
        return f"n={a.ctx.rank}; mask={a.to_mask():#x}"
    return f"n={a.ctx.rank}; {{{','.join(str(x) for x in a)}}}"


def _first_non_space(text: str) -> int:
    return len(text) - len(text.lstrip())
