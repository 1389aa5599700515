"""Tolerances, congruences, closure generation, enumeration, kernels, images."""

import itertools
import random

import numpy as np
import pytest

from tolift.corpus import chain_semilattice, left_zero, random_magma, two_atom_meet
from tolift.errors import CapExceededError, NotAToleranceError, ParseError
from tolift.relations import (BinaryRelation, Congruence, ElementMap, Tolerance,
                              enumerate_tolerances, format_relation, image_under,
                              is_compatible, is_congruence, is_tolerance, kernel,
                              parse_pair_spec, parse_pairs_file, parse_relation,
                              tolerance_generated)

T1_PAIRS = [(0, 1), (1, 0), (1, 2), (2, 1)]


def t1_relation():
    return BinaryRelation.from_pairs(3, T1_PAIRS, reflexive=True)


def ref_compatible(alg, rel):
    """Oracle: definitional compatibility scan in pure Python."""
    members = rel.pairs()
    for name, arity in alg.sig.ops:
        for tup in itertools.product(members, repeat=arity):
            fa = alg.op_value(name, [a for a, _ in tup])
            fb = alg.op_value(name, [b for _, b in tup])
            if not rel.mat[fa, fb]:
                return False
    return True


class TestPredicates:
    def test_t1_is_compatible(self):
        ok, witness = is_compatible(chain_semilattice(3), t1_relation())
        assert ok and witness is None

    def test_full_relation_always_compatible(self, corpus):
        for _, alg in corpus:
            assert is_compatible(alg, BinaryRelation.full(alg.size))[0]

    def test_diagonal_always_compatible(self, corpus):
        for _, alg in corpus:
            assert is_compatible(alg, BinaryRelation.diagonal(alg.size))[0]

    def test_violation_witness_actually_violates(self):
        alg = chain_semilattice(3)
        rel = BinaryRelation.from_pairs(3, [(0, 2), (2, 0)], reflexive=True)
        ok, witness = is_compatible(alg, rel)
        assert not ok
        name, pairs = witness
        fa = alg.op_value(name, [a for a, _ in pairs])
        fb = alg.op_value(name, [b for _, b in pairs])
        assert not rel.mat[fa, fb]

    def test_agrees_with_reference(self, corpus):
        rng = random.Random(3)
        for _, alg in corpus:
            for _ in range(40):
                bits = rng.getrandbits(alg.size * alg.size)
                m = np.array([bits >> k & 1 for k in range(alg.size * alg.size)],
                             dtype=bool).reshape(alg.size, alg.size)
                rel = BinaryRelation(m)
                assert is_compatible(alg, rel)[0] == ref_compatible(alg, rel)

    def test_t1_tolerance_not_congruence(self):
        alg = chain_semilattice(3)
        assert is_tolerance(alg, t1_relation())
        assert not is_congruence(alg, t1_relation())

    def test_diagonal_is_congruence(self, corpus):
        for _, alg in corpus:
            assert is_congruence(alg, BinaryRelation.diagonal(alg.size))

    def test_missing_diagonal_not_tolerance(self):
        alg = chain_semilattice(3)
        rel = BinaryRelation.from_pairs(3, [(0, 0), (1, 1)])
        assert not is_tolerance(alg, rel)

    def test_size_mismatch(self):
        with pytest.raises(ParseError):
            is_compatible(chain_semilattice(3), BinaryRelation.diagonal(2))


class TestCertificates:
    def test_tolerance_constructor_validates(self):
        alg = chain_semilattice(3)
        Tolerance(t1_relation(), alg)  # fine
        with pytest.raises(NotAToleranceError, match="reflexive"):
            Tolerance(BinaryRelation.from_pairs(3, [(0, 1)]), alg)
        with pytest.raises(NotAToleranceError, match="symmetric"):
            Tolerance(BinaryRelation.from_pairs(3, [(0, 1)], reflexive=True), alg)
        with pytest.raises(NotAToleranceError, match="compatible"):
            Tolerance(BinaryRelation.from_pairs(3, [(0, 2), (2, 0)], reflexive=True),
                      alg)

    def test_congruence_requires_transitivity(self):
        alg = chain_semilattice(3)
        with pytest.raises(NotAToleranceError, match="transitive"):
            Congruence(t1_relation(), alg)

    def test_congruence_classes(self):
        c = Congruence(BinaryRelation.from_pairs(
            3, [(0, 1), (1, 0)], reflexive=True))
        assert c.classes() == [[0, 1], [2]]


class TestToleranceGenerated:
    def test_single_pair_pulls_in_meet(self):
        # closing (0,2) forces (0,1) = (min(0,1), min(2,1))
        tol = tolerance_generated(chain_semilattice(3), [(0, 2)])
        expected = BinaryRelation.from_pairs(
            3, [(0, 2), (2, 0), (0, 1), (1, 0)], reflexive=True)
        assert tol.rel == expected

    def test_empty_seed_gives_diagonal(self, corpus):
        for _, alg in corpus:
            assert tolerance_generated(alg, []).rel == BinaryRelation.diagonal(alg.size)

    def test_t1_from_its_generators(self):
        tol = tolerance_generated(chain_semilattice(3), [(0, 1), (1, 2)])
        assert tol.rel == t1_relation()

    def test_out_of_range_pair(self):
        with pytest.raises(ParseError):
            tolerance_generated(chain_semilattice(3), [(0, 9)])

    def test_idempotent(self, corpus):
        rng = random.Random(23)
        for _, alg in corpus:
            for _ in range(30):
                pairs = [(rng.randrange(alg.size), rng.randrange(alg.size))
                         for _ in range(rng.randrange(4))]
                tol = tolerance_generated(alg, pairs)
                again = tolerance_generated(alg, tol.rel.pairs())
                assert again.rel == tol.rel

    def test_least_among_enumerated_exhaustive_n3(self, corpus):
        for _, alg in [c for c in corpus if c[1].size <= 3]:
            tolerances = enumerate_tolerances(alg)
            all_pairs = list(itertools.product(range(alg.size), repeat=2))
            for bits in range(1 << len(all_pairs)):
                seed = [p for k, p in enumerate(all_pairs) if bits >> k & 1]
                generated = tolerance_generated(alg, seed)
                assert any(generated.rel == t.rel for t in tolerances)
                for t in tolerances:
                    if all(t.rel.mat[a, b] for a, b in seed):
                        assert t.rel.contains(generated.rel)

    def test_least_among_enumerated_sampled_n4(self):
        alg = random_magma(4, 29)
        tolerances = enumerate_tolerances(alg)
        rng = random.Random(31)
        for _ in range(150):
            seed = [(rng.randrange(4), rng.randrange(4))
                    for _ in range(rng.randrange(5))]
            generated = tolerance_generated(alg, seed)
            assert any(generated.rel == t.rel for t in tolerances)
            for t in tolerances:
                if all(t.rel.mat[a, b] for a, b in seed):
                    assert t.rel.contains(generated.rel)


class TestEnumerateTolerances:
    def test_trivial_algebra(self):
        tols = enumerate_tolerances(random_magma(1, 0))
        assert len(tols) == 1
        assert tols[0].rel == BinaryRelation.diagonal(1)

    def test_all_outputs_are_tolerances(self, corpus):
        for _, alg in corpus:
            for tol in enumerate_tolerances(alg):
                assert is_tolerance(alg, tol.rel)

    def test_min_chain_inventory(self):
        alg = chain_semilattice(3)
        rels = [t.rel for t in enumerate_tolerances(alg)]
        assert BinaryRelation.diagonal(3) in rels
        assert t1_relation() in rels
        assert BinaryRelation.from_pairs(3, [(0, 1), (1, 0)], reflexive=True) in rels
        assert BinaryRelation.full(3) in rels

    def test_matches_reference_filter_and_order(self, corpus):
        for _, alg in [c for c in corpus if c[1].size <= 3]:
            n = alg.size
            positions = [(i, j) for i in range(n) for j in range(i + 1, n)]
            expected = []
            for bits in range(1 << len(positions)):
                m = np.eye(n, dtype=bool)
                for k, (i, j) in enumerate(positions):
                    if bits >> k & 1:
                        m[i, j] = m[j, i] = True
                rel = BinaryRelation(m)
                if ref_compatible(alg, rel):
                    expected.append(rel)
            expected.sort(key=lambda r: (int(r.mat.sum()), tuple(r.mat.reshape(-1))))
            assert [t.rel for t in enumerate_tolerances(alg)] == expected

    def test_cap(self):
        with pytest.raises(CapExceededError):
            enumerate_tolerances(random_magma(6, 1), cap=5)


class TestKernelAndImage:
    def test_kernel_of_identity_map(self):
        m = ElementMap(3, 3, (0, 1, 2))
        assert kernel(m).rel == BinaryRelation.diagonal(3)

    def test_kernel_of_constant_map(self):
        m = ElementMap(3, 1, (0, 0, 0))
        assert kernel(m).rel == BinaryRelation.full(3)

    def test_kernel_of_merge_map(self):
        m = ElementMap(3, 2, (0, 0, 1))
        assert kernel(m).rel == BinaryRelation.from_pairs(
            3, [(0, 1), (1, 0)], reflexive=True)

    def test_kernel_always_equivalence(self):
        rng = random.Random(41)
        for _ in range(50):
            dom = rng.randrange(1, 6)
            cod = rng.randrange(1, 6)
            m = ElementMap(dom, cod, tuple(rng.randrange(cod) for _ in range(dom)))
            rel = kernel(m).rel
            assert rel.is_reflexive() and rel.is_symmetric() and rel.is_transitive()

    def test_image_under_identity(self):
        r = t1_relation()
        assert image_under(ElementMap(3, 3, (0, 1, 2)), r) == r

    def test_image_of_diagonal_surjective(self):
        m = ElementMap(4, 2, (0, 1, 0, 1))
        assert image_under(m, BinaryRelation.diagonal(4)) == BinaryRelation.diagonal(2)

    def test_image_example(self):
        m = ElementMap(3, 2, (0, 0, 1))
        r = BinaryRelation.from_pairs(3, [(1, 2), (2, 1)], reflexive=True)
        assert image_under(m, r) == BinaryRelation.full(2)

    def test_image_preserves_reflexive_symmetric(self):
        rng = random.Random(43)
        for _ in range(60):
            dom = rng.randrange(1, 6)
            cod = rng.randrange(1, dom + 1)
            images = list(range(cod)) + [rng.randrange(cod) for _ in range(dom - cod)]
            rng.shuffle(images)
            m = ElementMap(dom, cod, tuple(images))
            pairs = [(rng.randrange(dom), rng.randrange(dom))
                     for _ in range(rng.randrange(6))]
            r = BinaryRelation.from_pairs(dom, pairs, reflexive=True, symmetric=True)
            img = image_under(m, r)
            assert img.is_reflexive() and img.is_symmetric()

    def test_size_mismatch(self):
        with pytest.raises(ParseError):
            image_under(ElementMap(2, 2, (0, 1)), BinaryRelation.diagonal(3))

    def test_element_map_validation(self):
        with pytest.raises(ParseError):
            ElementMap(2, 2, (0, 5))
        with pytest.raises(ParseError):
            ElementMap(3, 2, (0, 1))


class TestRelationFiles:
    def test_round_trip(self):
        r = t1_relation()
        assert parse_relation(format_relation(r)) == r

    def test_format_layout(self):
        assert format_relation(BinaryRelation.diagonal(2)) == "rel 2\n10\n01\n"

    @pytest.mark.parametrize("bad", [
        "10\n01\n",                 # missing header
        "rel 2\n10\n",              # missing row
        "rel 2\n10\n012\n",         # wrong width / bad character
        "rel two\n",                # bad size
    ])
    def test_malformed_rejected(self, bad):
        with pytest.raises(ParseError):
            parse_relation(bad)

    def test_pair_spec(self):
        assert parse_pair_spec("0-1,1-2") == [(0, 1), (1, 2)]
        assert parse_pair_spec("") == []
        assert parse_pair_spec(" 2-0 ") == [(2, 0)]
        with pytest.raises(ParseError):
            parse_pair_spec("0:1")

    def test_pairs_file(self):
        assert parse_pairs_file("# seed\n0 1\n\n1 2\n") == [(0, 1), (1, 2)]
        with pytest.raises(ParseError):
            parse_pairs_file("0-1\n")
