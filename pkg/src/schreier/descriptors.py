"""Text descriptors for families, blocks, spaces and prefixes.

A descriptor is ``name`` or ``name(arg, key=value, ...)`` where arguments may
themselves be descriptors, for example ``conv(T(mu=1,theta=1/2),q=2)``.
"""

from __future__ import annotations

import re

from .blocks import Dirac, RepeatedAverages
from .errors import DescriptorError, OrdinalParseError
from .families import (
    AllFinite,
    Compose,
    FineSchreier,
    Pair,
    Schreier,
    Singletons,
    TensorPow,
)
from .norms import C0, ConvexifyQ, DualOf, HXi, Lp, Tsirelson
from .ordinals import parse_index
from .sequences import parse_prefix

FAMILY_GRAMMAR = "S(xi) | F(xi) | F(w1) | singletons | all | compose(P,Q) | pair(P,Q) | tensor(P,m)"
BLOCK_GRAMMAR = "dirac | RA(xi)"
SPACE_GRAMMAR = "l<p> | lp(p) | linf | c0 | T(mu=..,theta=..) | conv(T(..),q=..) | dual(T(..)|conv(..),N=..) | hxi(H,xi=..)"

_NAME = re.compile(r"^\s*([A-Za-z_][A-Za-z0-9_]*)\s*(?:\((.*)\))?\s*$", re.S)


def _split_args(text: str) -> list[str]:
    """Split on commas that are not nested inside parentheses."""
    out, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise DescriptorError(f"unbalanced parentheses in {text!r}")
        if ch == "," and depth == 0:
            out.append("".join(cur).strip())
            cur = []
        else:
            cur.append(ch)
    if depth:
        raise DescriptorError(f"unbalanced parentheses in {text!r}")
    tail = "".join(cur).strip()
    if tail or out:
        out.append(tail)
    return out


def _call(text: str) -> tuple[str, list[str], dict[str, str]]:
    m = _NAME.match(text)
    if m is None:
        raise DescriptorError(f"cannot read descriptor {text!r}")
    name, inner = m.group(1), m.group(2)
    pos, kw = [], {}
    for arg in _split_args(inner) if inner is not None else []:
        if not arg:
            raise DescriptorError(f"empty argument in {text!r}")
        head = arg.split("(", 1)[0]
        if "=" in head:
            k, v = arg.split("=", 1)
            kw[k.strip()] = v.strip()
        else:
            pos.append(arg)
    return name, pos, kw


def _arg(name: str, pos: list, kw: dict, key: str, index: int, default=None):
    if key in kw:
        return kw[key]
    if index < len(pos):
        return pos[index]
    if default is not None:
        return default
    raise DescriptorError(f"{name} needs argument {key!r}")


def _index(text: str, grammar: str):
    try:
        return parse_index(text)
    except (OrdinalParseError, ValueError, TypeError) as exc:
        raise DescriptorError(f"bad ordinal {text!r}; expected {grammar}") from exc


def parse_family(text: str):
    """Parse a family descriptor such as ``S(2)``, ``F(w+1)`` or ``pair(F(1),F(2))``."""
    text = text.strip()
    compact = re.fullmatch(r"([SF])(\d+)", text)
    if compact:
        text = f"{compact.group(1)}({compact.group(2)})"
    name, pos, kw = _call(text)
    key = name.lower()
    if name == "S" or key == "schreier":
        return Schreier(_index(_arg(name, pos, kw, "xi", 0), FAMILY_GRAMMAR))
    if name == "F" or key == "fine":
        return FineSchreier(_index(_arg(name, pos, kw, "xi", 0), FAMILY_GRAMMAR))
    if key == "singletons":
        return Singletons()
    if key == "all":
        return AllFinite()
    if key == "compose":
        return Compose(parse_family(_arg(name, pos, kw, "outer", 0)), parse_family(_arg(name, pos, kw, "inner", 1)))
    if key == "pair":
        return Pair(parse_family(_arg(name, pos, kw, "first", 0)), parse_family(_arg(name, pos, kw, "second", 1)))
    if key == "tensor":
        return TensorPow(parse_family(_arg(name, pos, kw, "base", 0)), int(_arg(name, pos, kw, "m", 1)))
    raise DescriptorError(f"unknown family {text!r}; expected {FAMILY_GRAMMAR}")


def parse_block(text: str):
    """``dirac`` or ``RA(xi)``."""
    name, pos, kw = _call(text.strip())
    key = name.lower()
    if key == "dirac":
        return Dirac()
    if key in ("ra", "averages"):
        return RepeatedAverages(_index(_arg(name, pos, kw, "xi", 0), BLOCK_GRAMMAR))
    raise DescriptorError(f"unknown block {text!r}; expected {BLOCK_GRAMMAR}")


def parse_space(text: str):
    """Parse a space descriptor, e.g. ``hxi(l2,xi=1)`` or ``dual(T(mu=1,theta=1/2),N=10)``."""
    text = text.strip()
    low = text.lower()
    if low in ("c0", "c_0"):
        return C0()
    if low in ("linf", "l_inf", "l∞"):
        return Lp("inf")
    m = re.fullmatch(r"l_?(\d+(?:/\d+)?)", low)
    name, pos, kw = _call(text) if m is None else ("l", [m.group(1)], {})
    key = "lp" if m else name.lower()
    try:
        if key == "lp":
            return Lp(_arg(name, pos, kw, "p", 0))
        if key in ("t", "tsirelson"):
            mu = _index(_arg(name, pos, kw, "mu", 0, "1"), SPACE_GRAMMAR)
            return Tsirelson(mu, _arg(name, pos, kw, "theta", 1, "1/2"))
        if key == "conv":
            return ConvexifyQ(parse_space(_arg(name, pos, kw, "base", 0)), _arg(name, pos, kw, "q", 1))
        if key == "dual":
            return DualOf(parse_space(_arg(name, pos, kw, "base", 0)), int(_arg(name, pos, kw, "N", 1)))
        if key == "hxi":
            return HXi(parse_space(_arg(name, pos, kw, "H", 0)), _index(_arg(name, pos, kw, "xi", 1), SPACE_GRAMMAR))
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        if isinstance(exc, DescriptorError):
            raise
        raise DescriptorError(f"bad space {text!r}: {exc}") from exc
    raise DescriptorError(f"unknown space {text!r}; expected {SPACE_GRAMMAR}")


def parse_prefix_text(text: str):
    """Prefixes: ``2,4,6,8``, ``2,4,6,...`` or ``1,5,arith(10,3)...``."""
    try:
        return parse_prefix(text)
    except ValueError as exc:
        if isinstance(exc, DescriptorError):
            raise
        raise DescriptorError(f"bad prefix {text!r}: {exc}") from exc
