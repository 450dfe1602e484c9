"""Acceptance criteria, one test each, with their time limits.

Each test records a ``PASS``/``FAIL`` line; the lines are printed in the
pytest terminal summary, or directly when this file is run as a script.
"""
import pathlib
import random
import time

import pytest

import oracles
from flocks import cli, flock, harness, logic
from flocks.flock import believed, contract, expand, fukv_delete, identical, make_flock
from flocks.harness import TrialConfig
from flocks.logic import Atom, Not, parse_formula

GOLDEN = pathlib.Path(__file__).parent / "golden"
RESULTS = []

A, B = Atom("A"), Atom("B")


class criterion:
    def __init__(self, number, title, limit):
        self.number, self.title, self.limit = number, title, limit

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.perf_counter() - self.start
        ok = exc_type is None and elapsed < self.limit
        line = (f"criterion {self.number:2d} {'PASS' if ok else 'FAIL'} "
                f"{self.title} ({elapsed:.2f}s, limit {self.limit:g}s)")
        RESULTS.append(line)
        print(line)
        if exc_type is None:
            assert elapsed < self.limit, line
        return False


def _assert_clean(report, trials):
    assert report.trials == trials, report.render()
    assert report.passed, report.render()


def test_01_niamey_trace():
    with criterion(1, "Niamey trace", 1.0):
        start = make_flock([["A", "B"]])
        first = contract(start, "A & B")
        assert identical(first, make_flock([["A"], ["B"]]))
        assert logic.equivalent(flock.belief_formula(first), parse_formula("A | B"))
        second = contract(first, A)
        assert second == make_flock([["B"]])
        assert believed(second, B)
        expanded, used = expand(first, B, auto_freshen=True)
        assert used == Not(Not(B))
        final = contract(expanded, B)
        assert final == make_flock([["A"]])
        assert believed(final, A)
        assert cli.scenario("niamey") == (GOLDEN / "niamey.txt").read_text()


def test_02_syntax_sensitivity():
    with criterion(2, "syntax sensitivity", 1.0):
        primed = make_flock([[Not(Not(A))], ["A", "B"]])
        assert believed(primed, A)
        assert not believed(primed, "A & B")
        plain = make_flock([["A"], ["A", "B"]])
        assert flock.normalize(plain) == make_flock([["A", "B"]])
        assert believed(plain, "A & B")
        assert cli.scenario("syntax-sensitivity") == \
            (GOLDEN / "syntax-sensitivity.txt").read_text()


def test_03_fukv_contrast():
    with criterion(3, "FUKV contrast", 1.0):
        start = make_flock([["A", "B"]])
        AB = parse_formula("A & B")
        ours_1 = contract(contract(start, AB), A)
        ours_2 = contract(contract(start, A), AB)
        assert identical(ours_1, ours_2)
        assert ours_2 == make_flock([["B"]])
        fukv_1 = fukv_delete(fukv_delete(start, AB), A)
        fukv_2 = fukv_delete(fukv_delete(start, A), AB)
        assert fukv_1 == make_flock([[]])
        assert fukv_2 == make_flock([["B"]])
        assert not identical(fukv_1, fukv_2)
        assert cli.scenario("fukv-contrast") == (GOLDEN / "fukv-contrast.txt").read_text()


def test_04_lemma_contraction_suite():
    with criterion(4, "contraction oracle suite, 500 trials", 60):
        cfg = TrialConfig(seed=0, trials=500, atoms=3, max_bases=3, max_base_size=3)
        _assert_clean(harness.check_lemma_contraction(cfg), 500)


def test_05_theorem_merge_suite():
    with criterion(5, "merge isomorphism suite, 200 trials", 60):
        cfg = TrialConfig(seed=0, trials=200, atoms=4, max_bases=3, max_base_size=3)
        _assert_clean(harness.check_theorem_merge(cfg), 200)


def test_06_expansion_suite():
    with criterion(6, "expansion suite, 200 trials", 60):
        cfg = TrialConfig(seed=0, trials=200, atoms=3, max_bases=3, max_base_size=3)
        _assert_clean(harness.check_expansion(cfg), 200)


def test_07_commutativity_suite():
    with criterion(7, "commutativity suite, 300 trials", 60):
        cfg = TrialConfig(seed=0, trials=300, atoms=3, max_bases=3, max_base_size=3)
        report = harness.check_commutativity(cfg)
        _assert_clean(report, 300)
        # every trial must actually compare both contraction orders
        assert report.trials - report.skipped >= 250, report.render()


def test_08_persistence_suite():
    with criterion(8, "persistence suite, 300 trials", 30):
        cfg = TrialConfig(seed=0, trials=300, atoms=3, max_bases=3, max_base_size=3)
        _assert_clean(harness.check_persistence(cfg), 300)


def test_09_constructibility_explorer():
    with criterion(9, "constructibility explorer", 120):
        hard = harness.explore_constructibility(
            make_flock([["p"], ["p & q"]]), depth=4, atoms=2)
        assert not hard.found
        assert len(hard.reached_per_depth) == 5
        easy = harness.explore_constructibility(make_flock([["p"], ["q"]]), depth=2, atoms=2)
        assert easy.found
        assert len(easy.witness) - 1 <= 2
        assert identical(harness.replay(easy.witness), make_flock([["p"], ["q"]]))


def test_10_logic_layer():
    with criterion(10, "logic round trip and consequence laws", 30):
        rng = random.Random(2024)
        names = oracles.ATOMS
        asts = [harness.random_formula(rng, names, rng.randint(0, 5)) for _ in range(1000)]
        for f in asts:
            assert logic.parse_formula(logic.render_formula(f)) == f
        for _ in range(1000):
            gamma = [rng.choice(asts) for _ in range(rng.randint(0, 3))]
            extra = [rng.choice(asts) for _ in range(rng.randint(0, 2))]
            f, g = rng.choice(asts), rng.choice(asts)
            assert logic.entails(gamma, f) == oracles.entails(gamma, f)
            assert logic.entails(gamma + [f], f)
            if logic.entails(gamma, f):
                assert logic.entails(gamma + extra, f)
                if logic.entails(gamma + [f], g):
                    assert logic.entails(gamma, g)


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
