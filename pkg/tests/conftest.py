"""Shared fixtures and term generators for the test suite."""

import random

import pytest

from tolift import kernels
from tolift.corpus import standard_corpus
from tolift.terms import App, Signature, Term, Var

BINARY_SIG = Signature((("m", 2),))
MIXED_SIG = Signature((("m", 2), ("f", 1), ("e", 0)))


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    # absorb JIT compilation before any timed assertion runs
    kernels.warm_up()


@pytest.fixture(scope="session")
def corpus():
    return standard_corpus()


def random_term(rng: random.Random, sig: Signature, variables: list[str],
                depth: int) -> Term:
    """A random well-formed term; variables drawn with replacement."""
    nullary = [name for name, k in sig.ops if k == 0]
    positive = [(name, k) for name, k in sig.ops if k >= 1]

    def build(d: int) -> Term:
        if d == 0 or not positive or rng.random() < 0.3:
            if variables and (not nullary or rng.random() < 0.75):
                return Var(rng.choice(variables))
            return App(rng.choice(nullary), ())
        name, k = rng.choice(positive)
        return App(name, tuple(build(d - 1) for _ in range(k)))

    return build(depth)


def random_linear_term(rng: random.Random, sig: Signature, variables: list[str],
                       depth: int) -> Term:
    """A random term in which each variable occurs at most once.

    Builds a tree shape whose leaf count never exceeds the variable pool,
    then fills the leaves with distinct variables.
    """
    positive = [(name, k) for name, k in sig.ops if k >= 1]
    pool = list(variables)
    rng.shuffle(pool)

    def shape(d: int, max_leaves: int) -> Term:
        usable = [(name, k) for name, k in positive if k <= max_leaves]
        if d == 0 or max_leaves == 1 or not usable or rng.random() < 0.3:
            return Var(pool.pop())
        name, k = rng.choice(usable)
        total = rng.randint(k, max_leaves)
        shares = _composition(rng, total, k)
        return App(name, tuple(shape(d - 1, s) for s in shares))

    return shape(depth, len(pool))


def _composition(rng: random.Random, total: int, parts: int) -> list[int]:
    """Split `total` into `parts` positive summands, uniformly-ish."""
    cuts = sorted(rng.sample(range(1, total), parts - 1)) if parts > 1 else []
    bounds = [0] + cuts + [total]
    return [bounds[i + 1] - bounds[i] for i in range(parts)]
