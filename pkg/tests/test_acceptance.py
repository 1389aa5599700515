"""Acceptance criteria, one test per criterion, each timed at its stated cap.

Run with `pytest -s tests/test_acceptance.py` to see the per-criterion lines.
"""

import random
import subprocess
import sys
import time
from importlib.resources import files

import pytest

from tolift.algebra import parse_algebra, satisfies
from tolift.complexes import (complex_algebra, complex_eval_all, complex_term_eval,
                              lift, pointwise_eval_all, pointwise_term_eval,
                              verify_lift)
from tolift.corpus import BINARY_SIG, random_magma, standard_corpus, two_atom_meet
from tolift.relations import (BinaryRelation, Tolerance, enumerate_tolerances,
                              image_under, tolerance_generated)
from tolift.terms import (IdentitySet, is_linear, parse_identity, parse_term,
                          print_term)

from conftest import random_linear_term, random_term

DATA = files("tolift") / "data"
ASSOC = parse_identity("m(m(x,y),z) = m(x,m(y,z))", BINARY_SIG)
COMM = parse_identity("m(x,y) = m(y,x)", BINARY_SIG)


def criterion(number: int, limit_s: float, description: str):
    """Time the body, enforce the cap, and print one PASS/FAIL line."""
    def wrap(fn):
        def run():
            start = time.perf_counter()
            try:
                fn()
            except BaseException:
                print(f"ACCEPTANCE {number} FAIL: {description}")
                raise
            elapsed = time.perf_counter() - start
            ok = elapsed < limit_s
            print(f"ACCEPTANCE {number} {'PASS' if ok else 'FAIL'} "
                  f"({elapsed:.2f}s / limit {limit_s:.0f}s): {description}")
            assert ok, f"criterion {number} exceeded {limit_s}s ({elapsed:.2f}s)"
        return run
    return wrap


def small_corpus():
    return [alg for _, alg in standard_corpus() if alg.size <= 3]


def t1_of(alg):
    return Tolerance(BinaryRelation.from_pairs(
        3, [(0, 1), (1, 0), (1, 2), (2, 1)], reflexive=True), alg)


def test_criterion_1_worked_example(corpus):
    @criterion(1, 1.0, "worked example on the 3-chain min semilattice")
    def body():
        alg = dict(standard_corpus())["chain3-min"]
        t1 = t1_of(alg)
        res = lift(alg, t1)
        assert len(res.blocks) == 5
        assert res.b.size == 7
        assert len({bi for _, bi in res.elements}) == 5  # theta classes
        assert image_under(res.phi, res.theta) == t1.rel
        report = verify_lift(alg, t1, res, IdentitySet(BINARY_SIG))
        assert report.ok and len(report.checks) == 7
    body()


def test_criterion_2_exhaustive_lift_verification():
    @criterion(2, 60.0, "checks 1-6 pass for every tolerance of every corpus "
                        "algebra plus 20 seeded random tables")
    def body():
        algebras = small_corpus()
        algebras += [random_magma(2 + seed % 2, seed=100 + seed) for seed in range(20)]
        lifts = 0
        for alg in algebras:
            for tol in enumerate_tolerances(alg):
                res = lift(alg, tol)
                mandatory = [c for c in res.report.checks if c.number <= 6]
                assert len(mandatory) == 6
                assert all(c.passed for c in mandatory), (alg, tol)
                lifts += 1
        assert lifts >= 25 * 2  # every algebra has at least diagonal and full
    body()


def test_criterion_3_linear_transport():
    @criterion(3, 30.0, "associativity/commutativity transport to every lift")
    def body():
        for alg in small_corpus():
            held = [law for law in (ASSOC, COMM) if satisfies(alg, law).holds]
            if not held:
                continue
            for tol in enumerate_tolerances(alg):
                res = lift(alg, tol)
                assert res.b.size ** 3 <= 15 ** 3
                for law in held:
                    assert satisfies(res.b, law).holds, (alg, tol, law)
    body()


def test_criterion_4_linearity_is_needed():
    @criterion(4, 1.0, "non-linear idempotence fails on the complex algebra and B")
    def body():
        alg = two_atom_meet()
        ident = parse_identity("x = m(x,x)", BINARY_SIG)
        assert not is_linear(ident)
        assert satisfies(alg, ident).holds
        c = complex_algebra(alg)
        x = 0b110  # the subset {1, 2}
        assert complex_term_eval(c, ident.rhs, {"x": x}) == 0b111
        assert pointwise_term_eval(alg, ident.rhs, {"x": x}) == 0b110
        assert not satisfies(c.algebra, ident).holds
        full = Tolerance(BinaryRelation.full(3), alg)
        res = lift(alg, full, IdentitySet(BINARY_SIG, (ident,)))
        (entry,) = res.report.transports
        assert entry.holds_on_base and not entry.holds_on_lift
        assert res.report.ok  # non-linear transport is reported, not required
    body()


def test_criterion_5_closure_minimality():
    @criterion(5, 30.0, "generated tolerance is the minimal enumerated one "
                        "containing each sampled seed")
    def body():
        rng = random.Random(2024)
        samples = 0
        for alg in small_corpus():
            n = alg.size
            tolerances = enumerate_tolerances(alg)
            all_pairs = [(a, b) for a in range(n) for b in range(n)]
            if (1 << len(all_pairs)) <= 16:
                chosen = list(range(1 << len(all_pairs)))
            else:
                chosen = [rng.randrange(1 << len(all_pairs)) for _ in range(128)]
            for bits in chosen:
                seed = [p for k, p in enumerate(all_pairs) if bits >> k & 1]
                gen = tolerance_generated(alg, seed)
                assert any(gen.rel == t.rel for t in tolerances)
                assert all(gen.rel.mat[a, b] for a, b in seed)
                for t in tolerances:
                    if all(t.rel.mat[a, b] for a, b in seed):
                        assert t.rel.contains(gen.rel)
                samples += 1
        assert samples >= 100
    body()


def test_criterion_6_pointwise_property():
    @criterion(6, 60.0, "linear terms evaluate pointwise; arbitrary terms "
                        "evaluate to supersets, strictly somewhere")
    def body():
        rng = random.Random(99)
        algebras = small_corpus()
        complexes = [complex_algebra(a) for a in algebras]
        variables = ("x", "y", "z", "w")
        for i in range(210):
            t = random_linear_term(rng, BINARY_SIG, list(variables), depth=3)
            alg = algebras[i % len(algebras)]
            c = complexes[i % len(algebras)]
            pw = pointwise_eval_all(alg, t, variables)
            cw = complex_eval_all(c, t, variables)
            assert (pw == cw).all(), print_term(t)
        strict = 0
        for i in range(210):
            t = random_term(rng, BINARY_SIG, list(variables), depth=3)
            alg = algebras[i % len(algebras)]
            c = complexes[i % len(algebras)]
            pw = pointwise_eval_all(alg, t, variables)
            cw = complex_eval_all(c, t, variables)
            assert (cw | pw == cw).all(), print_term(t)
            strict += int((cw != pw).any())
        assert strict > 0
    body()


def test_criterion_7_parser_round_trip():
    @criterion(7, 1.0, "500 random terms survive parse(print(t))")
    def body():
        rng = random.Random(7)
        for _ in range(500):
            t = random_term(rng, BINARY_SIG, ["x", "y", "z", "w"], depth=4)
            assert parse_term(print_term(t), BINARY_SIG) == t
    body()


def test_criterion_8_cli_end_to_end(tmp_path):
    @criterion(8, 120.0, "CLI pipeline: lift+verify exit 0, tampered exit 1, "
                         "malformed exit 2, byte-identical reruns")
    def body():
        env_cmd = [sys.executable, "-m", "tolift.cli"]
        chain3 = str(DATA / "chain3.alg")
        rel = str(DATA / "chain3_T1.rel")
        ids = str(DATA / "comm_semigroup.ids")

        out1 = tmp_path / "lift1.txt"
        out2 = tmp_path / "lift2.txt"
        for out in (out1, out2):
            done = subprocess.run(env_cmd + ["lift", "--algebra", chain3,
                                             "--relation", rel,
                                             "--identities", ids,
                                             "--out", str(out)],
                                  capture_output=True)
            assert done.returncode == 0, done.stderr
        assert out1.read_bytes() == out2.read_bytes()
        assert out1.read_bytes() == (DATA / "chain3_T1_lift.txt").read_bytes()

        done = subprocess.run(env_cmd + ["verify", "--algebra", chain3,
                                         "--relation", rel,
                                         "--lift", str(out1),
                                         "--identities", ids],
                              capture_output=True)
        assert done.returncode == 0, done.stderr

        done = subprocess.run(env_cmd + ["verify", "--algebra", chain3,
                                         "--relation", rel,
                                         "--lift", str(DATA / "chain3_T1_lift_tampered.txt")],
                              capture_output=True, text=True)
        assert done.returncode == 1
        assert "check 5 phi(theta) within tolerance: FAIL" in done.stdout

        done = subprocess.run(env_cmd + ["check",
                                         "--algebra", str(DATA / "malformed.alg"),
                                         "--identities", ids],
                              capture_output=True)
        assert done.returncode == 2
    body()
