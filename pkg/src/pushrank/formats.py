"""TSV vector files, hub files and patch files.

A hub file holds one or more sections, each introduced by

    #hub <node> alpha=<alpha> graph=<sha256 hex>

and followed by ``node<TAB>value`` lines.  A patch file has the single header
``#patch alpha=<alpha> graph=<sha256 hex>``.  Plain vector files are just the
``node<TAB>value`` lines; other ``#`` lines are comments.
"""
from __future__ import annotations

import math
import re
from typing import Iterable, TextIO

from .graph import SparseVector
from .hubs import HubSet

_HUB_HEADER = re.compile(r"#hub\s+(\d+)\s+alpha=(\S+)\s+graph=([0-9a-fA-F]+)\s*$")
_PATCH_HEADER = re.compile(r"#patch\s+alpha=(\S+)\s+graph=([0-9a-fA-F]+)\s*$")


class VectorFileError(ValueError):
    pass


class DigestMismatch(VectorFileError):
    pass


def format_score(x: float) -> str:
    """Shortest decimal that round-trips, with integral values printed bare ("1", not "1.0")."""
    text = repr(float(x))
    return text[:-2] if text.endswith(".0") else text


def ranked_lines(vec: SparseVector) -> list[str]:
    """``node<TAB>score`` lines by descending score, then ascending node."""
    entries = sorted(vec.items(), key=lambda kv: (-kv[1], kv[0]))
    return [f"{node}\t{format_score(score)}\n" for node, score in entries]


def _parse_entry(line: str, lineno: int) -> tuple[int, float]:
    fields = line.split()
    if len(fields) != 2:
        raise VectorFileError(f"line {lineno}: expected 'node<TAB>value', got {line!r}")
    try:
        node, value = int(fields[0]), float(fields[1])
    except ValueError:
        raise VectorFileError(f"line {lineno}: cannot parse {line!r}") from None
    if node < 0 or not value >= 0 or math.isinf(value):
        raise VectorFileError(f"line {lineno}: invalid entry {line!r}")
    return node, value


def read_vector(lines: Iterable[str]) -> SparseVector:
    entries: dict[int, float] = {}
    for lineno, raw in enumerate(lines, 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        node, value = _parse_entry(line, lineno)
        if node in entries:
            raise VectorFileError(f"line {lineno}: node {node} listed twice")
        entries[node] = value
    return SparseVector(entries)


def write_vector(out: TextIO, vec: SparseVector) -> None:
    for node, value in sorted(vec.items()):
        out.write(f"{node}\t{format_score(value)}\n")


def _check_meta(kind: str, alpha: float, digest: str, want_alpha: float | None, want_digest: str | None) -> None:
    if want_digest is not None and digest.lower() != want_digest.lower():
        raise DigestMismatch(f"{kind} file was computed for graph {digest}, not {want_digest}")
    if want_alpha is not None and alpha != want_alpha:
        raise VectorFileError(f"{kind} file was computed for alpha={alpha}, not {want_alpha}")


def write_hubs(out: TextIO, hubs: HubSet, alpha: float, digest: str) -> None:
    for x in sorted(hubs):
        out.write(f"#hub {x} alpha={alpha!r} graph={digest}\n")
        write_vector(out, hubs[x])


def read_hubs(lines: Iterable[str], *, alpha: float | None = None, digest: str | None = None) -> HubSet:
    """Parse a hub file, checking each section against ``alpha``/``digest`` when given."""
    sections: dict[int, dict[int, float]] = {}
    current: dict[int, float] | None = None
    file_alpha = file_digest = None
    for lineno, raw in enumerate(lines, 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#hub"):
            m = _HUB_HEADER.match(line)
            if not m:
                raise VectorFileError(f"line {lineno}: malformed hub header {line!r}")
            node, a, d = int(m.group(1)), float(m.group(2)), m.group(3)
            _check_meta("hub", a, d, alpha, digest)
            if file_alpha is not None and (a, d) != (file_alpha, file_digest):
                raise VectorFileError(f"line {lineno}: hub sections disagree on alpha or graph")
            file_alpha, file_digest = a, d
            if node in sections:
                raise VectorFileError(f"line {lineno}: hub {node} appears twice")
            current = sections[node] = {}
            continue
        if line.startswith("#"):
            continue
        if current is None:
            raise VectorFileError(f"line {lineno}: entry before any #hub header")
        node, value = _parse_entry(line, lineno)
        if node in current:
            raise VectorFileError(f"line {lineno}: node {node} listed twice")
        current[node] = value
    if not sections:
        raise VectorFileError("hub file has no #hub sections")
    return HubSet({x: SparseVector(v) for x, v in sections.items()}, alpha=file_alpha, digest=file_digest)


def write_patch(out: TextIO, s: SparseVector, alpha: float, digest: str) -> None:
    out.write(f"#patch alpha={alpha!r} graph={digest}\n")
    write_vector(out, s)


def read_patch(lines: Iterable[str], *, alpha: float | None = None,
               digest: str | None = None) -> SparseVector:
    lines = list(lines)
    header = next((i for i, line in enumerate(lines) if line.strip()), None)
    if header is None:
        raise VectorFileError("patch file is empty")
    m = _PATCH_HEADER.match(lines[header].strip())
    if not m:
        raise VectorFileError(f"line {header + 1}: expected '#patch alpha=... graph=...' header")
    _check_meta("patch", float(m.group(1)), m.group(2), alpha, digest)
    return read_vector(lines[header + 1:])
