"""Finite algebras as flat operation tables, with brute-force satisfaction.

Tables are row-major with the leftmost argument most significant: an arity-k
operation on universe {0..n-1} is a flat int64 array of length n^k, and
f(a_1..a_k) sits at index ((a_1*n + a_2)*n + ...)*n + a_k.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import kernels
from .errors import CapExceededError, EvalError, ParseError, SignatureMismatchError
from .terms import App, Identity, IdentitySet, Signature, Term, Var

DEFAULT_ASSIGNMENT_CAP = 10_000_000

Assignment = dict[str, int]


class FiniteAlgebra:
    """Universe {0..size-1} with one total operation table per symbol."""

    def __init__(self, size: int, sig: Signature, tables):
        if size < 1:
            raise ParseError(f"algebra size must be positive, got {size}")
        self.size = size
        self.sig = sig
        packed = []
        for (name, arity), table in zip(sig.ops, tables, strict=True):
            arr = np.asarray(table, dtype=np.int64).reshape(-1)
            if len(arr) != size ** arity:
                raise ParseError(
                    f"table for {name}/{arity} has {len(arr)} entries, "
                    f"expected {size ** arity}")
            if len(arr) and (arr.min() < 0 or arr.max() >= size):
                raise ParseError(f"table for {name!r} has entries outside 0..{size - 1}")
            arr.flags.writeable = False
            packed.append(arr)
        self.tables: tuple[np.ndarray, ...] = tuple(packed)

    def table(self, name: str) -> np.ndarray:
        return self.tables[self.sig.index(name)]

    def op_value(self, name: str, args) -> int:
        """Apply one operation to a tuple of universe elements."""
        arity = self.sig.arity(name)
        if len(args) != arity:
            raise EvalError(f"{name!r} takes {arity} argument(s), got {len(args)}")
        idx = 0
        for a in args:
            idx = idx * self.size + int(a)
        return int(self.table(name)[idx])

    @cached_property
    def _table_pack(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(tables_flat, table_off, arities) in signature order, for kernels."""
        offs = np.zeros(len(self.tables), dtype=np.int64)
        pos = 0
        for i, t in enumerate(self.tables):
            offs[i] = pos
            pos += len(t)
        flat = (np.concatenate(self.tables) if self.tables
                else np.zeros(0, dtype=np.int64))
        arities = np.array([a for _, a in self.sig.ops], dtype=np.int64)
        return flat, offs, arities

    def __eq__(self, other) -> bool:
        return (isinstance(other, FiniteAlgebra)
                and self.size == other.size
                and self.sig == other.sig
                and all(np.array_equal(a, b)
                        for a, b in zip(self.tables, other.tables)))

    def __hash__(self):
        return hash((self.size, self.sig,
                     tuple(t.tobytes() for t in self.tables)))

    def __repr__(self) -> str:
        return f"FiniteAlgebra(size={self.size}, sig=[{self.sig}])"


@dataclass(frozen=True)
class TermProgram:
    """A term flattened to postorder node arrays for the kernels.

    Variable slots index into the `variables` tuple the program was compiled
    against; operation slots index into the signature's operation list.
    """

    code: np.ndarray
    child_ptr: np.ndarray
    child: np.ndarray
    variables: tuple[str, ...]


def compile_term(t: Term, sig: Signature, variables: tuple[str, ...]) -> TermProgram:
    code: list[int] = []
    child_ptr: list[int] = [0]
    child: list[int] = []

    def emit(node: Term) -> int:
        if isinstance(node, Var):
            try:
                slot = variables.index(node.name)
            except ValueError:
                raise EvalError(f"variable {node.name!r} not assigned") from None
            code.append(~slot)
            child_ptr.append(len(child))
        else:
            assert isinstance(node, App)
            kids = [emit(a) for a in node.args]
            if node.op not in sig:
                raise EvalError(f"unknown operation {node.op!r}")
            code.append(sig.index(node.op))
            child.extend(kids)
            child_ptr.append(len(child))
        return len(code) - 1

    emit(t)
    return TermProgram(np.array(code, dtype=np.int64),
                       np.array(child_ptr, dtype=np.int64),
                       np.array(child, dtype=np.int64),
                       variables)


def evaluate(alg: FiniteAlgebra, t: Term, a: Assignment) -> int:
    """Recursive term evaluation at a single assignment."""
    if isinstance(t, Var):
        if t.name not in a:
            raise EvalError(f"variable {t.name!r} not assigned")
        value = a[t.name]
        if not 0 <= value < alg.size:
            raise EvalError(f"assignment {t.name}={value} outside universe")
        return value
    assert isinstance(t, App)
    if t.op not in alg.sig:
        raise EvalError(f"unknown operation {t.op!r}")
    return alg.op_value(t.op, [evaluate(alg, arg, a) for arg in t.args])


def eval_on_points(alg: FiniteAlgebra, prog: TermProgram, var_values: np.ndarray) -> np.ndarray:
    """Kernel-backed evaluation of a compiled term at explicit points."""
    flat, offs, _ = alg._table_pack
    return kernels.eval_program_points(prog.code, prog.child_ptr, prog.child,
                                       flat, offs, alg.size, var_values)


@dataclass(frozen=True)
class IdentityReport:
    """Outcome of one satisfaction check, with the first witness on failure."""

    identity: Identity
    holds: bool
    witness: Assignment | None

    def __str__(self) -> str:
        if self.holds:
            return f"PASS  {self.identity}"
        parts = " ".join(f"{v}={x}" for v, x in self.witness.items())
        return f"FAIL  {self.identity}  [witness {parts}]"


def satisfies(alg: FiniteAlgebra, ident: Identity,
              cap: int = DEFAULT_ASSIGNMENT_CAP) -> IdentityReport:
    """Exhaustive check of lhs = rhs over all n^(#variables) assignments.

    The witness, when present, is the lexicographically first failing
    assignment in the identity's variable order.
    """
    variables = ident.variables
    total = alg.size ** len(variables)
    if total > cap:
        raise CapExceededError(
            f"{total} assignments exceed the cap of {cap} for {ident}")
    lhs = compile_term(ident.lhs, alg.sig, variables)
    rhs = compile_term(ident.rhs, alg.sig, variables)
    flat, offs, _ = alg._table_pack
    hit = int(kernels.find_identity_violation(
        lhs.code, lhs.child_ptr, lhs.child, rhs.code, rhs.child_ptr, rhs.child,
        flat, offs, alg.size, len(variables), 0, total))
    if hit < 0:
        return IdentityReport(ident, True, None)
    return IdentityReport(ident, False, decode_assignment(hit, variables, alg.size))


def decode_assignment(flat: int, variables: tuple[str, ...], n: int) -> Assignment:
    """Invert the row-major flat index (first variable most significant)."""
    out: Assignment = {}
    for name in reversed(variables):
        out[name] = flat % n
        flat //= n
    return dict(reversed(out.items()))


def satisfies_all(alg: FiniteAlgebra, ids: IdentitySet,
                  cap: int = DEFAULT_ASSIGNMENT_CAP) -> list[IdentityReport]:
    return [satisfies(alg, ident, cap) for ident in ids]


def direct_product(a1: FiniteAlgebra, a2: FiniteAlgebra) -> FiniteAlgebra:
    """Coordinatewise product; element (i, j) encoded as i * a2.size + j."""
    if a1.sig != a2.sig:
        raise SignatureMismatchError(
            f"cannot form product of [{a1.sig}] and [{a2.sig}]")
    n1, n2 = a1.size, a2.size
    n = n1 * n2
    tables = []
    for (name, arity), t1, t2 in zip(a1.sig.ops, a1.tables, a2.tables):
        args = argument_grid(n, arity)
        idx1 = np.zeros(n ** arity, dtype=np.int64)
        idx2 = np.zeros(n ** arity, dtype=np.int64)
        for j in range(arity):
            idx1 = idx1 * n1 + args[j] // n2
            idx2 = idx2 * n2 + args[j] % n2
        tables.append(t1[idx1] * n2 + t2[idx2])
    return FiniteAlgebra(n, a1.sig, tables)


def argument_grid(n: int, arity: int) -> np.ndarray:
    """Shape (arity, n^arity) columns of all argument tuples, row-major."""
    pts = np.arange(n ** arity, dtype=np.int64)
    cols = np.empty((arity, n ** arity), dtype=np.int64)
    div = 1
    for j in range(arity - 1, -1, -1):
        cols[j] = (pts // div) % n
        div *= n
    return cols


def subuniverse_closure(alg: FiniteAlgebra, seed) -> frozenset[int]:
    """Least superset of `seed` closed under all operations."""
    members = set()
    for x in seed:
        if not 0 <= x < alg.size:
            raise EvalError(f"seed element {x} outside universe 0..{alg.size - 1}")
        members.add(int(x))
    while True:
        current = np.array(sorted(members), dtype=np.int64)
        new = set(members)
        for (name, arity), table in zip(alg.sig.ops, alg.tables):
            if arity == 0:
                new.add(int(table[0]))
                continue
            if len(current) == 0:
                continue
            choice = argument_grid(len(current), arity)
            idx = np.zeros(choice.shape[1], dtype=np.int64)
            for j in range(arity):
                idx = idx * alg.size + current[choice[j]]
            new.update(int(v) for v in np.unique(table[idx]))
        if new == members:
            return frozenset(members)
        members = new


# ---------------------------------------------------------------------------
# Algebra file format: line "size N", then per operation a line "op NAME ARITY"
# followed by N^ARITY whitespace/newline-separated integers in row-major order.
# '#' starts a comment; blank lines are ignored.

def parse_algebra(text: str) -> FiniteAlgebra:
    tokens: list[str] = []
    for raw in text.splitlines():
        tokens.extend(raw.split("#", 1)[0].split())
    pos = 0

    def take(what: str) -> str:
        nonlocal pos
        if pos >= len(tokens):
            raise ParseError(f"unexpected end of algebra file, expected {what}")
        tok = tokens[pos]
        pos += 1
        return tok

    def take_int(what: str) -> int:
        tok = take(what)
        try:
            return int(tok)
        except ValueError:
            raise ParseError(f"expected {what}, found {tok!r}") from None

    if take("'size'") != "size":
        raise ParseError("algebra file must start with 'size N'")
    size = take_int("universe size")
    ops: list[tuple[str, int]] = []
    tables: list[list[int]] = []
    while pos < len(tokens):
        if take("'op'") != "op":
            raise ParseError(f"expected 'op NAME ARITY', found {tokens[pos - 1]!r}")
        name = take("operation name")
        arity = take_int("operation arity")
        table = [take_int(f"table entry for {name!r}") for _ in range(size ** arity)]
        ops.append((name, arity))
        tables.append(table)
    return FiniteAlgebra(size, Signature(tuple(ops)), tables)


def format_algebra(alg: FiniteAlgebra, header: str | None = None) -> str:
    """Canonical text form; tables printed `size` entries per line."""
    lines = []
    if header:
        lines.extend(f"# {h}" for h in header.splitlines())
    lines.append(f"size {alg.size}")
    for (name, arity), table in zip(alg.sig.ops, alg.tables):
        lines.append(f"op {name} {arity}")
        if arity == 0:
            lines.append(str(int(table[0])))
        else:
            for row_start in range(0, len(table), alg.size):
                row = table[row_start:row_start + alg.size]
                lines.append(" ".join(str(int(v)) for v in row))
    return "\n".join(lines) + "\n"
