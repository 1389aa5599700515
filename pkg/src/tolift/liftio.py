"""Bit-exact text serialization of lift results.

Layout, all indices ascending, newline = LF:

    blocks K
    i: {a,b,...}
    elements M
    j: (x, block i)
    op NAME ARITY          (one table section per operation, B's indexing)
    ...table entries...
    theta
    class c: j1 j2 ...
    phi
    j -> x
"""

from __future__ import annotations

import re

import numpy as np

from .algebra import FiniteAlgebra
from .complexes import LiftResult, mask_of, mask_str
from .errors import ParseError
from .relations import BinaryRelation, ElementMap
from .terms import Signature


def write_lift(lr: LiftResult) -> str:
    lines = [f"blocks {len(lr.blocks)}"]
    for i, mask in enumerate(lr.blocks):
        lines.append(f"{i}: {mask_str(mask)}")
    lines.append(f"elements {lr.b.size}")
    for j, (x, bi) in enumerate(lr.elements):
        lines.append(f"{j}: ({x}, block {bi})")
    for (name, arity), table in zip(lr.b.sig.ops, lr.b.tables):
        lines.append(f"op {name} {arity}")
        if arity == 0:
            lines.append(str(int(table[0])))
        else:
            for start in range(0, len(table), lr.b.size):
                row = table[start:start + lr.b.size]
                lines.append(" ".join(str(int(v)) for v in row))
    lines.append("theta")
    seen: set[int] = set()
    c = 0
    for j in range(lr.b.size):
        if j in seen:
            continue
        members = [k for k in range(lr.b.size) if lr.theta.mat[j, k]]
        seen.update(members)
        lines.append(f"class {c}: " + " ".join(str(k) for k in members))
        c += 1
    lines.append("phi")
    for j in range(lr.b.size):
        lines.append(f"{j} -> {lr.phi(j)}")
    return "\n".join(lines) + "\n"


_BLOCK_LINE = re.compile(r"(\d+):\s*\{([\d,\s]*)\}$")
_ELEMENT_LINE = re.compile(r"(\d+):\s*\((\d+),\s*block\s+(\d+)\)$")
_CLASS_LINE = re.compile(r"class\s+(\d+):\s*([\d\s]*)$")
_PHI_LINE = re.compile(r"(\d+)\s*->\s*(\d+)$")


class _Lines:
    def __init__(self, text: str):
        self.lines = [ln.rstrip() for ln in text.splitlines()]
        self.pos = 0

    def next(self, what: str) -> tuple[str, int]:
        while self.pos < len(self.lines) and not self.lines[self.pos].strip():
            self.pos += 1
        if self.pos >= len(self.lines):
            raise ParseError(f"unexpected end of lift file, expected {what}")
        self.pos += 1
        return self.lines[self.pos - 1].strip(), self.pos

    def peek(self) -> str | None:
        p = self.pos
        while p < len(self.lines) and not self.lines[p].strip():
            p += 1
        return self.lines[p].strip() if p < len(self.lines) else None


def read_lift(text: str, base: FiniteAlgebra) -> LiftResult:
    """Parse a serialized lift over `base`; contents are claims, the semantic
    checks stay with verify_lift."""
    src = _Lines(text)

    line, no = src.next("'blocks K'")
    head = line.split()
    if len(head) != 2 or head[0] != "blocks" or not head[1].isdigit():
        raise ParseError(f"expected 'blocks K', found {line!r}", no, where="line")
    blocks = []
    for i in range(int(head[1])):
        line, no = src.next("a block line")
        m = _BLOCK_LINE.fullmatch(line)
        if not m or int(m.group(1)) != i:
            raise ParseError(f"bad block line {line!r}", no, where="line")
        members = [int(tok) for tok in m.group(2).replace(",", " ").split()]
        if not members or members != sorted(set(members)):
            raise ParseError(f"block members must be ascending in {line!r}",
                             no, where="line")
        blocks.append(mask_of(members))

    line, no = src.next("'elements M'")
    head = line.split()
    if len(head) != 2 or head[0] != "elements" or not head[1].isdigit():
        raise ParseError(f"expected 'elements M', found {line!r}", no, where="line")
    size = int(head[1])
    elements = []
    for j in range(size):
        line, no = src.next("an element line")
        m = _ELEMENT_LINE.fullmatch(line)
        if not m or int(m.group(1)) != j:
            raise ParseError(f"bad element line {line!r}", no, where="line")
        elements.append((int(m.group(2)), int(m.group(3))))

    ops: list[tuple[str, int]] = []
    tables: list[np.ndarray] = []
    while True:
        nxt = src.peek()
        if nxt is None or not nxt.startswith("op "):
            break
        line, no = src.next("'op NAME ARITY'")
        parts = line.split()
        if len(parts) != 3 or not parts[2].isdigit():
            raise ParseError(f"bad op header {line!r}", no, where="line")
        name, arity = parts[1], int(parts[2])
        need = size ** arity
        entries: list[int] = []
        while len(entries) < need:
            line, no = src.next(f"table entries for {name!r}")
            for tok in line.split():
                if not tok.isdigit():
                    raise ParseError(f"bad table entry {tok!r}", no, where="line")
                entries.append(int(tok))
        if len(entries) != need:
            raise ParseError(f"table for {name!r} has {len(entries)} entries, "
                             f"expected {need}", no, where="line")
        ops.append((name, arity))
        tables.append(np.array(entries, dtype=np.int64))

    line, no = src.next("'theta'")
    if line != "theta":
        raise ParseError(f"expected 'theta', found {line!r}", no, where="line")
    theta = np.zeros((size, size), dtype=bool)
    while True:
        nxt = src.peek()
        if nxt is None or not nxt.startswith("class "):
            break
        line, no = src.next("a theta class")
        m = _CLASS_LINE.fullmatch(line)
        if not m:
            raise ParseError(f"bad theta class line {line!r}", no, where="line")
        members = [int(tok) for tok in m.group(2).split()]
        if any(j >= size for j in members):
            raise ParseError(f"theta member out of range in {line!r}", no, where="line")
        for a in members:
            for b in members:
                theta[a, b] = True

    line, no = src.next("'phi'")
    if line != "phi":
        raise ParseError(f"expected 'phi', found {line!r}", no, where="line")
    images = [0] * size
    for j in range(size):
        line, no = src.next("a phi line")
        m = _PHI_LINE.fullmatch(line)
        if not m or int(m.group(1)) != j:
            raise ParseError(f"bad phi line {line!r}", no, where="line")
        images[j] = int(m.group(2))
    if src.peek() is not None:
        raise ParseError(f"trailing content {src.peek()!r} in lift file")

    b = FiniteAlgebra(size, Signature(tuple(ops)), tables)
    return LiftResult(base, b, tuple(blocks), tuple(elements),
                      BinaryRelation(theta),
                      ElementMap(size, base.size, tuple(images)))
