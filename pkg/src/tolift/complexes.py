"""Complex algebras, tolerance blocks, and the congruence-image lifting.

Nonempty subsets of the universe {0..n-1} are encoded as integer bitmasks
(bit i set iff i is a member), so the carrier of the complex algebra is
simply the masks 1..2^n-1 in ascending order.

Given a tolerance T of an algebra A, `lift` builds:

  * the block algebra on {X nonempty : X*X inside T}, a subalgebra of the
    complex algebra of A;
  * the algebra B on {(x, Y) : Y a block, x in Y}, a subalgebra of the
    product of A with the block algebra;
  * theta, the kernel of the block projection (a congruence of B);
  * phi, the element projection (a surjective homomorphism B -> A).

Then phi maps theta exactly onto T, and every linear identity holding in A
transports to B.  `verify_lift` re-derives each of those claims from
definitions, without reusing the construction's tables.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .algebra import (FiniteAlgebra, argument_grid, compile_term, eval_on_points,
                      evaluate, satisfies, DEFAULT_ASSIGNMENT_CAP)
from .errors import CapExceededError, EvalError, LiftInternalError, LiftStructureError, \
    SignatureMismatchError
from .relations import (BinaryRelation, ElementMap, Tolerance,
                        image_under, is_congruence, kernel)
from .terms import Identity, IdentitySet, Term, is_balanced_linear, is_linear, \
    term_variables

DEFAULT_SIZE_CAP = 6

MaskAssignment = dict[str, int]


def mask_of(elements) -> int:
    """Bitmask of an iterable of universe elements."""
    m = 0
    for e in elements:
        m |= 1 << e
    return m


def elements_of(mask: int) -> list[int]:
    """Ascending members of a bitmask."""
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def mask_str(mask: int) -> str:
    return "{" + ",".join(str(e) for e in elements_of(mask)) + "}"


def _check_mask(mask: int, n: int) -> int:
    if not 0 < mask < (1 << n):
        raise EvalError(f"subset code {mask} not a nonempty subset of 0..{n - 1}")
    return mask


def _check_size_cap(alg: FiniteAlgebra, cap_n: int):
    if alg.size > cap_n:
        raise CapExceededError(
            f"complex construction over 2^{alg.size}-1 subsets refused for "
            f"size {alg.size} > cap {cap_n}")


@dataclass(frozen=True)
class ComplexAlgebra:
    """The algebra of all nonempty subsets, operations applied complexwise.

    `algebra` acts on carrier indices; index i holds the mask carrier[i],
    which is always i + 1.
    """

    base: FiniteAlgebra
    carrier: tuple[int, ...]
    algebra: FiniteAlgebra

    def index_of(self, mask: int) -> int:
        return _check_mask(mask, self.base.size) - 1

    def mask_at(self, index: int) -> int:
        return self.carrier[index]


def complex_algebra(alg: FiniteAlgebra, cap_n: int = DEFAULT_SIZE_CAP) -> ComplexAlgebra:
    """f(X_1..X_k) = {f(x_1..x_k) : x_i in X_i} over all nonempty subsets."""
    _check_size_cap(alg, cap_n)
    n = alg.size
    num_masks = (1 << n) - 1
    tables = []
    for (name, arity), table in zip(alg.sig.ops, alg.tables):
        masks = kernels.complex_op_table(table, arity, n)
        tables.append(masks - 1)  # carrier index of mask m is m - 1
    return ComplexAlgebra(alg, tuple(range(1, num_masks + 1)),
                          FiniteAlgebra(num_masks, alg.sig, tables))


def complex_term_eval(c: ComplexAlgebra, t: Term, a: MaskAssignment) -> int:
    """Evaluate `t` inside the complex algebra (compositional).

    For linear terms this equals the pointwise set; in general it is a
    superset, because each occurrence of a repeated variable may pick a
    different member.
    """
    idx_assignment = {v: c.index_of(m) for v, m in a.items()}
    return c.mask_at(evaluate(c.algebra, t, idx_assignment))


def pointwise_term_eval(alg: FiniteAlgebra, t: Term, a: MaskAssignment) -> int:
    """{t(x_1..x_v) : x_i in X_i, one choice per variable}, by brute force."""
    variables = term_variables(t)
    choices = [elements_of(_check_mask(a[v], alg.size)) for v in variables]
    out = 0
    for point in itertools.product(*choices):
        value = evaluate(alg, t, dict(zip(variables, point)))
        out |= 1 << value
    return out


def _subset_or_fold(cube: np.ndarray, axis: int, n: int) -> np.ndarray:
    """Replace an element axis of length n by a subset axis of length 2^n-1,
    OR-combining the slices selected by each mask."""
    moved = np.moveaxis(cube, axis, 0)
    out = np.empty(((1 << n) - 1,) + moved.shape[1:], dtype=np.int64)
    for mask in range(1, 1 << n):
        low = mask & -mask
        rest = mask ^ low
        single = moved[low.bit_length() - 1]
        out[mask - 1] = single if rest == 0 else out[rest - 1] | single
    return np.moveaxis(out, 0, axis)


def pointwise_eval_all(alg: FiniteAlgebra, t: Term,
                       variables: tuple[str, ...] | None = None) -> np.ndarray:
    """Pointwise sets of `t` for every subset assignment at once.

    Returns masks over the row-major grid of (2^n - 1)^v assignments (each
    variable running over masks 1..2^n-1).  Aggregates the term's values on
    the full element grid, so it never touches complex-algebra tables; it is
    cross-checked against pointwise_term_eval in the test suite.
    """
    n = alg.size
    if variables is None:
        variables = term_variables(t)
    v = len(variables)
    prog = compile_term(t, alg.sig, variables)
    values = eval_on_points(alg, prog, argument_grid(n, v))
    cube = np.left_shift(np.int64(1), values).reshape((n,) * v)
    for axis in range(v):
        cube = _subset_or_fold(cube, axis, n)
    return cube.reshape(-1)


def complex_eval_all(c: ComplexAlgebra, t: Term,
                     variables: tuple[str, ...] | None = None) -> np.ndarray:
    """Complexwise values of `t` for every subset assignment, same grid order
    as pointwise_eval_all."""
    if variables is None:
        variables = term_variables(t)
    prog = compile_term(t, c.algebra.sig, variables)
    num_masks = c.algebra.size
    idx = eval_on_points(c.algebra, prog, argument_grid(num_masks, len(variables)))
    return idx + 1


@dataclass(frozen=True)
class BlockAlgebra:
    """The subalgebra of the complex algebra carried by the tolerance blocks:
    nonempty X with X*X inside T, in ascending bitmask order."""

    base: FiniteAlgebra
    tolerance: Tolerance
    blocks: tuple[int, ...]
    algebra: FiniteAlgebra

    def block_index(self, mask: int) -> int | None:
        # blocks are ascending, but a dict would be overkill at this size
        lo = 0
        hi = len(self.blocks)
        while lo < hi:
            mid = (lo + hi) // 2
            if self.blocks[mid] < mask:
                lo = mid + 1
            else:
                hi = mid
        return lo if lo < len(self.blocks) and self.blocks[lo] == mask else None


def _certified(alg: FiniteAlgebra, t: Tolerance) -> Tolerance:
    if t.algebra is None or t.algebra != alg:
        return Tolerance(t.rel, alg)  # re-certify against this algebra
    return t


def blocks_of(t: Tolerance) -> list[int]:
    """All nonempty X with X*X inside T, ascending bitmask order."""
    n = t.rel.size
    out = []
    for mask in range(1, 1 << n):
        members = elements_of(mask)
        if all(t.rel.mat[a, b] for a in members for b in members):
            out.append(mask)
    return out


def block_algebra(alg: FiniteAlgebra, t: Tolerance,
                  cap_n: int = DEFAULT_SIZE_CAP) -> BlockAlgebra:
    """Restrict the complex algebra of `alg` to the blocks of `t`.

    Closure of the block set under the complexwise operations is re-checked
    entry by entry; a violation would mean `t` is not actually a tolerance.
    """
    _check_size_cap(alg, cap_n)
    t = _certified(alg, t)
    n = alg.size
    blocks = blocks_of(t)
    for x in range(n):
        assert (1 << x) in blocks, "reflexivity must make every singleton a block"
    index_of = np.full((1 << n), -1, dtype=np.int64)
    index_of[np.array(blocks)] = np.arange(len(blocks))
    bm = np.array(blocks, dtype=np.int64)
    num_masks = (1 << n) - 1
    tables = []
    for (name, arity), table in zip(alg.sig.ops, alg.tables):
        cmasks = kernels.complex_op_table(table, arity, n)
        grid = argument_grid(len(blocks), arity)
        flat = np.zeros(grid.shape[1], dtype=np.int64)
        for j in range(arity):
            flat = flat * num_masks + (bm[grid[j]] - 1)
        out_masks = cmasks[flat]
        out_idx = index_of[out_masks]
        if (out_idx < 0).any():
            bad = int(out_masks[int(np.argmax(out_idx < 0))])
            raise LiftInternalError(
                f"block set not closed under {name!r}: image {mask_str(bad)} "
                "is not a block")
        tables.append(out_idx)
    return BlockAlgebra(alg, t, tuple(blocks),
                        FiniteAlgebra(len(blocks), alg.sig, tables))


@dataclass
class LiftResult:
    """The lifted algebra with its congruence, projection, and verdicts.

    * b acts on indices of `elements`; elements[j] = (x, block index),
      sorted by (block index, x);
    * blocks[i] is the bitmask of block i, ascending;
    * theta is the kernel of the block projection (certified a congruence by
      verification check 4);
    * phi projects element j to its first coordinate.

    `block_algebra` is kept for constructed lifts and None for lifts read
    back from files; verification never consults it.
    """

    base: FiniteAlgebra
    b: FiniteAlgebra
    blocks: tuple[int, ...]
    elements: tuple[tuple[int, int], ...]
    theta: BinaryRelation
    phi: ElementMap
    block_algebra: BlockAlgebra | None = None
    report: "VerificationReport | None" = None


def lift(alg: FiniteAlgebra, t: Tolerance, identities: IdentitySet | None = None,
         cap_n: int = DEFAULT_SIZE_CAP,
         cap_assignments: int = DEFAULT_ASSIGNMENT_CAP) -> LiftResult:
    """Build B = {(x, Y) : Y a block of t, x in Y} with theta and phi.

    Operations act coordinatewise: on the first coordinate through `alg`, on
    the second through the block algebra.  The result carries a verification
    report over `identities` (empty set when omitted).
    """
    ba = block_algebra(alg, t, cap_n)
    t = ba.tolerance
    elements = tuple((x, bi) for bi, mask in enumerate(ba.blocks)
                     for x in elements_of(mask))
    m = len(elements)
    xs = np.array([x for x, _ in elements], dtype=np.int64)
    bs = np.array([bi for _, bi in elements], dtype=np.int64)
    elem_index = np.full((alg.size, len(ba.blocks)), -1, dtype=np.int64)
    elem_index[xs, bs] = np.arange(m)
    tables = []
    for (name, arity), table, btable in zip(alg.sig.ops, alg.tables,
                                            ba.algebra.tables):
        grid = argument_grid(m, arity)
        xflat = np.zeros(grid.shape[1], dtype=np.int64)
        bflat = np.zeros(grid.shape[1], dtype=np.int64)
        for j in range(arity):
            xflat = xflat * alg.size + xs[grid[j]]
            bflat = bflat * len(ba.blocks) + bs[grid[j]]
        out = elem_index[table[xflat], btable[bflat]]
        if (out < 0).any():
            raise LiftInternalError(
                f"lifted carrier not closed under {name!r}")
        tables.append(out)
    b = FiniteAlgebra(m, alg.sig, tables)
    theta = kernel(ElementMap(m, len(ba.blocks), tuple(int(v) for v in bs))).rel
    phi = ElementMap(m, alg.size, tuple(int(v) for v in xs))
    result = LiftResult(alg, b, ba.blocks, elements, theta, phi, ba)
    result.report = verify_lift(alg, t, result,
                                identities if identities is not None
                                else IdentitySet(alg.sig),
                                cap=cap_assignments)
    return result


# ---------------------------------------------------------------------------
# Verification: every claim of the construction re-derived from definitions.

@dataclass(frozen=True)
class CheckResult:
    number: int
    name: str
    passed: bool
    detail: str = ""

    def __str__(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        suffix = f"  ({self.detail})" if self.detail else ""
        return f"check {self.number} {self.name}: {verdict}{suffix}"


@dataclass(frozen=True)
class IdentityTransport:
    """Transport record for one identity: linear identities holding on the
    base are required to hold on the lift; everything else is informational."""

    identity: Identity
    linear: bool
    balanced: bool
    holds_on_base: bool
    holds_on_lift: bool

    @property
    def required(self) -> bool:
        return self.linear and self.holds_on_base

    @property
    def ok(self) -> bool:
        return self.holds_on_lift or not self.required

    def __str__(self) -> str:
        kind = ("BALANCED-LINEAR" if self.balanced
                else "LINEAR" if self.linear else "NON-LINEAR")
        a = "holds" if self.holds_on_base else "FAILS"
        b = "holds" if self.holds_on_lift else "FAILS"
        note = "" if self.required else "  (not required)"
        return f"identity '{self.identity}' [{kind}]: {a} on base, {b} on lift{note}"


@dataclass
class VerificationReport:
    checks: list[CheckResult] = field(default_factory=list)
    transports: list[IdentityTransport] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def lines(self) -> list[str]:
        out = [str(c) for c in self.checks]
        out.extend(str(t) for t in self.transports)
        out.extend(f"warning: {w}" for w in self.warnings)
        out.append("verification: " + ("PASS" if self.ok else "FAIL"))
        return out


def _complexwise_image(alg: FiniteAlgebra, name: str, masks) -> int:
    """Definitional {f(x_1..x_k) : x_i in X_i}, one op application."""
    out = 0
    for point in itertools.product(*(elements_of(m) for m in masks)):
        out |= 1 << alg.op_value(name, point)
    return out


def _validate_structure(alg: FiniteAlgebra, lr: LiftResult):
    n = alg.size
    if lr.b.sig != alg.sig:
        raise SignatureMismatchError(
            f"lift signature [{lr.b.sig}] differs from base [{alg.sig}]")
    if list(lr.blocks) != sorted(set(lr.blocks)):
        raise LiftStructureError("block masks must be distinct and ascending")
    for mask in lr.blocks:
        if not 0 < mask < (1 << n):
            raise LiftStructureError(f"block mask {mask} outside 1..{(1 << n) - 1}")
    if len(lr.elements) != lr.b.size:
        raise LiftStructureError(
            f"{len(lr.elements)} elements listed for an algebra of size {lr.b.size}")
    if len(set(lr.elements)) != len(lr.elements):
        raise LiftStructureError("duplicate elements in lift")
    if list(lr.elements) != sorted(lr.elements, key=lambda e: (e[1], e[0])):
        raise LiftStructureError("elements must be sorted by (block index, element)")
    for x, bi in lr.elements:
        if not 0 <= x < n or not 0 <= bi < len(lr.blocks):
            raise LiftStructureError(f"element ({x}, block {bi}) out of range")
    if lr.phi.domain != lr.b.size or lr.phi.codomain != n:
        raise LiftStructureError("phi must map the lift carrier onto the base universe")
    if lr.theta.size != lr.b.size:
        raise LiftStructureError("theta must live on the lift carrier")


def verify_lift(alg: FiniteAlgebra, t: Tolerance, lr: LiftResult,
                ids: IdentitySet,
                cap: int = DEFAULT_ASSIGNMENT_CAP) -> VerificationReport:
    """Independent pass over every claim the lift makes.

    1. the element list is exactly {(x, Y) : Y a block of t, x in Y} and is
       closed under the complexwise-coordinatewise operations;
    2. phi is a homomorphism onto the base;
    3. phi is surjective, witnessed by x -> (x, {x});
    4. theta is a congruence of B;
    5. phi(theta) is contained in t;
    6. t is contained in phi(theta), witnessed per pair by Y = {x1, x2};
    7. required identity transports hold (linear identities true on the base).

    Each check recomputes from definitions: images elementwise with explicit
    choice tuples, never through the construction's block tables.
    """
    t = _certified(alg, t)
    _validate_structure(alg, lr)
    n = alg.size
    report = VerificationReport()
    pairs_as_masks = [(x, lr.blocks[bi]) for x, bi in lr.elements]
    element_set = set(pairs_as_masks)

    # (1) carrier identity + closure, straight from the definitions
    expected = {(x, mask) for mask in blocks_of(t) for x in elements_of(mask)}
    carrier_ok = element_set == expected
    closure_ok = True
    detail = ""
    if not carrier_ok:
        extra = element_set - expected
        missing = expected - element_set
        parts = []
        if extra:
            x, mask = sorted(extra)[0]
            parts.append(f"stray element ({x}, {mask_str(mask)})")
        if missing:
            x, mask = sorted(missing)[0]
            parts.append(f"missing element ({x}, {mask_str(mask)})")
        detail = "; ".join(parts)
    else:
        for name, arity in alg.sig.ops:
            for point in itertools.product(pairs_as_masks, repeat=arity):
                x = alg.op_value(name, [p[0] for p in point])
                mask = _complexwise_image(alg, name, [p[1] for p in point])
                if (x, mask) not in element_set:
                    closure_ok = False
                    detail = (f"{name} applied to {point} leaves the carrier "
                              f"at ({x}, {mask_str(mask)})")
                    break
            if not closure_ok:
                break
    report.checks.append(CheckResult(
        1, "carrier is the block subalgebra", carrier_ok and closure_ok, detail))

    # (2) phi homomorphism, using B's claimed tables against the base tables
    hom_ok = True
    detail = ""
    phi_arr = np.array(lr.phi.images, dtype=np.int64)
    for (name, arity), btab, atab in zip(alg.sig.ops, lr.b.tables, alg.tables):
        grid = argument_grid(lr.b.size, arity)
        bflat = np.zeros(grid.shape[1], dtype=np.int64)
        aflat = np.zeros(grid.shape[1], dtype=np.int64)
        for j in range(arity):
            bflat = bflat * lr.b.size + grid[j]
            aflat = aflat * n + phi_arr[grid[j]]
        mismatch = phi_arr[btab[bflat]] != atab[aflat]
        if mismatch.any():
            at = int(np.argmax(mismatch))
            args = tuple(int(grid[j][at]) for j in range(arity))
            hom_ok = False
            detail = f"phi(f^B{args}) != f^A(phi...) for {name!r}"
            break
    report.checks.append(CheckResult(2, "phi is a homomorphism", hom_ok, detail))

    # (3) surjectivity via the singleton witnesses x -> (x, {x})
    surj_ok = True
    detail = ""
    for x in range(n):
        witness = (x, 1 << x)
        if witness not in element_set:
            surj_ok = False
            detail = f"no element ({x}, {{{x}}})"
            break
        j = pairs_as_masks.index(witness)
        if lr.phi(j) != x:
            surj_ok = False
            detail = f"phi({j}) != {x}"
            break
    surj_ok = surj_ok and lr.phi.is_surjective()
    report.checks.append(CheckResult(3, "phi is surjective", surj_ok, detail))

    # (4) theta is a congruence of B
    cong_ok = is_congruence(lr.b, lr.theta)
    report.checks.append(CheckResult(4, "theta is a congruence of B", cong_ok))

    # (5) phi(theta) inside t
    image = image_under(lr.phi, lr.theta)
    inside = t.rel.contains(image)
    detail = ""
    if not inside:
        stray = sorted(set(image.pairs()) - set(t.rel.pairs()))[0]
        detail = f"pair {stray} escapes the tolerance"
    report.checks.append(CheckResult(5, "phi(theta) within tolerance", inside, detail))

    # (6) t inside phi(theta), constructively with Y = {x1, x2}
    cover_ok = True
    detail = ""
    index_of_pair = {p: j for j, p in enumerate(pairs_as_masks)}
    for x1, x2 in t.rel.pairs():
        y = (1 << x1) | (1 << x2)
        j1 = index_of_pair.get((x1, y))
        j2 = index_of_pair.get((x2, y))
        if j1 is None or j2 is None or not lr.theta.mat[j1, j2] \
                or lr.phi(j1) != x1 or lr.phi(j2) != x2:
            cover_ok = False
            detail = f"pair ({x1},{x2}) not realized through Y={mask_str(y)}"
            break
    report.checks.append(CheckResult(6, "tolerance within phi(theta)", cover_ok, detail))

    # (7) identity transport
    transports_ok = True
    for ident in ids:
        linear = is_linear(ident)
        holds_a = satisfies(alg, ident, cap).holds
        holds_b = satisfies(lr.b, ident, cap).holds
        entry = IdentityTransport(ident, linear, is_balanced_linear(ident),
                                  holds_a, holds_b)
        report.transports.append(entry)
        if not holds_a:
            report.warnings.append(
                f"base algebra does not satisfy '{ident}'; transport not promised")
        if not entry.ok:
            transports_ok = False
    report.checks.append(CheckResult(
        7, "linear identities transport", transports_ok,
        "" if transports_ok else "a linear identity true on the base fails on B"))
    return report
