"""Small bundled algebras used by the examples and the test corpus.

All use the single binary symbol m unless stated otherwise.
"""

from __future__ import annotations

import numpy as np

from .algebra import FiniteAlgebra
from .terms import Signature

BINARY_SIG = Signature((("m", 2),))


def chain_semilattice(n: int = 3) -> FiniteAlgebra:
    """The n-chain under min."""
    table = [min(a, b) for a in range(n) for b in range(n)]
    return FiniteAlgebra(n, BINARY_SIG, [table])


def two_atom_meet() -> FiniteAlgebra:
    """Meet-semilattice with bottom 0 and incomparable atoms 1, 2."""
    table = [[a if a == b else 0 for b in range(3)] for a in range(3)]
    return FiniteAlgebra(3, BINARY_SIG, [np.array(table).reshape(-1)])


def left_zero(n: int = 2) -> FiniteAlgebra:
    """m(a, b) = a; a semigroup that is not commutative for n >= 2."""
    table = [a for a in range(n) for _ in range(n)]
    return FiniteAlgebra(n, BINARY_SIG, [table])


def cyclic_group_mult(n: int = 3) -> FiniteAlgebra:
    """The multiplication-only reduct of the cyclic group of order n."""
    table = [(a + b) % n for a in range(n) for b in range(n)]
    return FiniteAlgebra(n, BINARY_SIG, [table])


def random_magma(size: int, seed: int) -> FiniteAlgebra:
    """A seeded arbitrary binary operation table."""
    rng = np.random.default_rng(seed)
    return FiniteAlgebra(size, BINARY_SIG,
                         [rng.integers(0, size, size * size, dtype=np.int64)])


def standard_corpus() -> list[tuple[str, FiniteAlgebra]]:
    """The named small-algebra corpus the acceptance checks run over."""
    return [
        ("chain3-min", chain_semilattice(3)),
        ("two-atom-meet", two_atom_meet()),
        ("left-zero-2", left_zero(2)),
        ("cyclic-3", cyclic_group_mult(3)),
        ("random-magma-3", random_magma(3, seed=2012)),
    ]
