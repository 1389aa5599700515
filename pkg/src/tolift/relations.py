"""Binary relations on finite universes: tolerances, congruences, kernels.

A tolerance of an algebra is a reflexive, symmetric relation compatible with
every operation; a congruence is additionally transitive.  Relations are
dense boolean matrices; the universes here are small.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .algebra import FiniteAlgebra
from .errors import CapExceededError, NotAToleranceError, ParseError

DEFAULT_ENUMERATION_CAP = 5

PairWitness = tuple[str, tuple[tuple[int, int], ...]]


class BinaryRelation:
    """An n x n boolean membership matrix; arbitrary relations allowed."""

    def __init__(self, mat):
        m = np.array(mat, dtype=bool)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ParseError(f"relation matrix must be square, got shape {m.shape}")
        m.flags.writeable = False
        self.mat = m
        self.size = m.shape[0]

    @classmethod
    def diagonal(cls, n: int) -> "BinaryRelation":
        return cls(np.eye(n, dtype=bool))

    @classmethod
    def full(cls, n: int) -> "BinaryRelation":
        return cls(np.ones((n, n), dtype=bool))

    @classmethod
    def from_pairs(cls, n: int, pairs, reflexive: bool = False,
                   symmetric: bool = False) -> "BinaryRelation":
        m = np.eye(n, dtype=bool) if reflexive else np.zeros((n, n), dtype=bool)
        for a, b in pairs:
            if not (0 <= a < n and 0 <= b < n):
                raise ParseError(f"pair ({a},{b}) outside universe 0..{n - 1}")
            m[a, b] = True
            if symmetric:
                m[b, a] = True
        return cls(m)

    def pairs(self) -> list[tuple[int, int]]:
        return [(int(a), int(b)) for a, b in np.argwhere(self.mat)]

    def contains(self, other: "BinaryRelation") -> bool:
        return bool((self.mat | other.mat == self.mat).all())

    def is_reflexive(self) -> bool:
        return bool(self.mat.diagonal().all())

    def is_symmetric(self) -> bool:
        return bool((self.mat == self.mat.T).all())

    def is_transitive(self) -> bool:
        step = (self.mat.astype(np.uint8) @ self.mat.astype(np.uint8)) > 0
        return bool((~step | self.mat).all())

    def __contains__(self, pair) -> bool:
        a, b = pair
        return bool(self.mat[a, b])

    def __eq__(self, other) -> bool:
        return (isinstance(other, BinaryRelation)
                and np.array_equal(self.mat, other.mat))

    def __hash__(self):
        return hash((self.size, self.mat.tobytes()))

    def __repr__(self) -> str:
        return f"BinaryRelation({self.size}, pairs={self.pairs()})"


def is_compatible(alg: FiniteAlgebra, r: BinaryRelation) -> tuple[bool, PairWitness | None]:
    """Brute force over all arity-tuples of member pairs, per operation.

    On failure, returns the operation name and the first violating tuple of
    member pairs ((a_1,b_1)..(a_k,b_k)).
    """
    if r.size != alg.size:
        raise ParseError(f"relation on {r.size} elements vs algebra on {alg.size}")
    rel = r.mat.astype(np.uint8)
    members = np.argwhere(r.mat)
    if len(members) == 0:
        return True, None
    pa = np.ascontiguousarray(members[:, 0].astype(np.int64))
    pb = np.ascontiguousarray(members[:, 1].astype(np.int64))
    for (name, arity), table in zip(alg.sig.ops, alg.tables):
        hit = int(kernels.compat_violation(table, arity, alg.size, pa, pb, rel))
        if hit >= 0:
            return False, (name, decode_pair_tuple(hit, arity, pa, pb))
    return True, None


def decode_pair_tuple(flat: int, arity: int, pa: np.ndarray, pb: np.ndarray):
    m = len(pa)
    idxs = []
    for _ in range(arity):
        idxs.append(flat % m)
        flat //= m
    idxs.reverse()
    return tuple((int(pa[i]), int(pb[i])) for i in idxs)


def is_tolerance(alg: FiniteAlgebra, r: BinaryRelation) -> bool:
    return (r.is_reflexive() and r.is_symmetric()
            and is_compatible(alg, r)[0])


def is_congruence(alg: FiniteAlgebra, r: BinaryRelation) -> bool:
    return is_tolerance(alg, r) and r.is_transitive()


@dataclass(frozen=True)
class Tolerance:
    """A relation verified reflexive, symmetric, and (when `algebra` is set)
    compatible with that algebra's operations.  Construction re-runs the
    checks, so holding a Tolerance is itself the certificate."""

    rel: BinaryRelation
    algebra: FiniteAlgebra | None = None

    def __post_init__(self):
        if not self.rel.is_reflexive():
            raise NotAToleranceError("not a tolerance: relation is not reflexive")
        if not self.rel.is_symmetric():
            raise NotAToleranceError("not a tolerance: relation is not symmetric")
        if self.algebra is not None:
            ok, witness = is_compatible(self.algebra, self.rel)
            if not ok:
                name, pairs = witness
                raise NotAToleranceError(
                    f"not a tolerance: relation is not compatible with {name!r} "
                    f"at pairs {pairs}")

    @property
    def size(self) -> int:
        return self.rel.size


@dataclass(frozen=True)
class Congruence(Tolerance):
    """A transitive tolerance."""

    def __post_init__(self):
        super().__post_init__()
        if not self.rel.is_transitive():
            raise NotAToleranceError("not a congruence: relation is not transitive")

    def classes(self) -> list[list[int]]:
        """Equivalence classes ordered by least member."""
        seen: set[int] = set()
        out = []
        for i in range(self.rel.size):
            if i in seen:
                continue
            cls = [j for j in range(self.rel.size) if self.rel.mat[i, j]]
            seen.update(cls)
            out.append(cls)
        return out


@dataclass(frozen=True)
class ElementMap:
    """A total map between universes, stored as the image list."""

    domain: int
    codomain: int
    images: tuple[int, ...]

    def __post_init__(self):
        if len(self.images) != self.domain:
            raise ParseError(f"map has {len(self.images)} images for domain {self.domain}")
        for x in self.images:
            if not 0 <= x < self.codomain:
                raise ParseError(f"image {x} outside codomain 0..{self.codomain - 1}")

    def __call__(self, x: int) -> int:
        return self.images[x]

    def is_surjective(self) -> bool:
        return len(set(self.images)) == self.codomain


def tolerance_generated(alg: FiniteAlgebra, pairs) -> Tolerance:
    """Least tolerance of `alg` containing `pairs`.

    Worklist fixpoint: start from the diagonal plus the symmetrized pairs and
    keep adding (f(a_1..a_k), f(b_1..b_k)) over member-pair tuples.
    """
    n = alg.size
    seed = BinaryRelation.from_pairs(n, pairs, reflexive=True, symmetric=True)
    flat, offs, arities = alg._table_pack
    closed = kernels.close_under_ops(flat, offs, arities, n,
                                     seed.mat.astype(np.uint8))
    return Tolerance(BinaryRelation(closed.astype(bool)), alg)


def enumerate_tolerances(alg: FiniteAlgebra,
                         cap: int = DEFAULT_ENUMERATION_CAP) -> list[Tolerance]:
    """All tolerances of `alg`, sorted by (pair count, lexicographic matrix).

    Scans every reflexive symmetric candidate, 2^(n(n-1)/2) of them, and
    keeps the compatible ones.
    """
    n = alg.size
    if n > cap:
        raise CapExceededError(
            f"enumeration over 2^{n * (n - 1) // 2} candidates refused for "
            f"size {n} > cap {cap}")
    positions = [(i, j) for i in range(n) for j in range(i + 1, n)]
    found = []
    for bits in range(1 << len(positions)):
        m = np.eye(n, dtype=bool)
        for p, (i, j) in enumerate(positions):
            if bits >> p & 1:
                m[i, j] = m[j, i] = True
        rel = BinaryRelation(m)
        if is_compatible(alg, rel)[0]:
            found.append(rel)
    found.sort(key=lambda r: (int(r.mat.sum()), tuple(r.mat.reshape(-1))))
    return [Tolerance(rel, alg) for rel in found]


def kernel(m: ElementMap, alg: FiniteAlgebra | None = None) -> Congruence:
    """The equivalence {(i, j) : m(i) = m(j)} on the domain.

    Pass the domain algebra to also certify compatibility; without it the
    congruence carries only the equivalence-relation checks.
    """
    images = np.array(m.images, dtype=np.int64)
    return Congruence(BinaryRelation(images[:, None] == images[None, :]), alg)


def image_under(m: ElementMap, r: BinaryRelation) -> BinaryRelation:
    """{(m(x), m(y)) : (x, y) in r} on the codomain."""
    if r.size != m.domain:
        raise ParseError(f"relation on {r.size} elements vs map domain {m.domain}")
    images = np.array(m.images, dtype=np.int64)
    out = np.zeros((m.codomain, m.codomain), dtype=bool)
    xs, ys = np.nonzero(r.mat)
    out[images[xs], images[ys]] = True
    return BinaryRelation(out)


# ---------------------------------------------------------------------------
# Relation file format: line "rel N" then N lines of N characters '0'/'1'.
# Pair specs: "a-b,c-d" inline, or one "a b" pair per line in a file.

def parse_relation(text: str) -> BinaryRelation:
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines or not lines[0].startswith("rel"):
        raise ParseError("relation file must start with 'rel N'")
    head = lines[0].split()
    if len(head) != 2 or not head[1].isdigit():
        raise ParseError(f"bad relation header {lines[0]!r}")
    n = int(head[1])
    if len(lines) != n + 1:
        raise ParseError(f"expected {n} matrix rows, found {len(lines) - 1}")
    m = np.zeros((n, n), dtype=bool)
    for i, row in enumerate(lines[1:]):
        if len(row) != n or set(row) - {"0", "1"}:
            raise ParseError(f"bad matrix row {row!r}", i + 2, where="line")
        m[i] = [c == "1" for c in row]
    return BinaryRelation(m)


def format_relation(r: BinaryRelation) -> str:
    rows = ["".join("1" if v else "0" for v in row) for row in r.mat]
    return f"rel {r.size}\n" + "\n".join(rows) + "\n"


def parse_pair_spec(spec: str) -> list[tuple[int, int]]:
    """Inline flag form: pairs "a-b" separated by commas; empty means none."""
    pairs = []
    for token in spec.split(","):
        token = token.strip()
        if not token:
            continue
        a, dash, b = token.partition("-")
        if not dash or not a.strip().isdigit() or not b.strip().isdigit():
            raise ParseError(f"bad pair {token!r}, expected A-B")
        pairs.append((int(a), int(b)))
    return pairs


def parse_pairs_file(text: str) -> list[tuple[int, int]]:
    """File form: one "a b" pair per line; '#' comments and blanks ignored."""
    pairs = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2 or not all(p.isdigit() for p in parts):
            raise ParseError(f"bad pair line {raw!r}", lineno, where="line")
        pairs.append((int(parts[0]), int(parts[1])))
    return pairs
