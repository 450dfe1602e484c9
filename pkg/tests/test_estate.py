import random

import networkx as nx
import pytest
from hypothesis import given, settings

import oracles
from flocks import logic
from flocks.errors import EmptyFlock, SignatureTooLarge, TautologyContraction, TooLarge
from flocks.estate import (EpistemicState, behaviorally_equivalent, belief_summary,
                           believes, contract_estate, dump, expand_estate, generate,
                           is_determinate, is_persistent, is_pure, isomorphic,
                           proposition_state, pure_merge)
from flocks.flock import expand, formulas_of, make_flock, merge, remainder_flock
from flocks.harness import TrialConfig, random_persistent_state
from flocks.logic import Atom, Not, parse_formula

A, B = Atom("A"), Atom("B")
NNA, NNB = Not(Not(A)), Not(Not(B))


def fl(*bases):
    return make_flock(bases)


def s(*fs):
    return frozenset(parse_formula(f) if isinstance(f, str) else f for f in fs)


def nx_isomorphic(E1, E2):
    """Independent route: networkx VF2 on the order with label truth tables."""
    sig = tuple(sorted(set(E1.signature) | set(E2.signature)))

    def graph(E):
        g = nx.DiGraph()
        for st in E.states:
            g.add_node(st, models=logic.models(E.label[st], sig))
        g.add_edges_from(E.prefer)
        return g

    return nx.is_isomorphic(graph(E1), graph(E2),
                            node_match=lambda a, b: a["models"] == b["models"])


class TestGenerate:
    def test_base(self):
        E = generate(fl(["A", "B"]))
        assert E.states == {s("A"), s("B"), s("A", "B")}
        assert E.prefer == {(s("A"), s("A", "B")), (s("B"), s("A", "B"))}
        assert E.label[s("A")] == s("A")

    def test_two_bases(self):
        E = generate(fl(["A"], ["B"]))
        assert E.states == {s("A"), s("B")}
        assert E.prefer == frozenset()

    def test_single(self):
        assert generate(fl(["A"])).states == {s("A")}

    def test_include_empty(self):
        E = generate(fl(["A"]), include_empty=True)
        assert E == proposition_state(A)
        assert generate(frozenset(), include_empty=True).states == {frozenset()}

    def test_empty_flock(self):
        with pytest.raises(EmptyFlock):
            generate(fl([]))

    def test_guard(self):
        big = fl([f"x{i}" for i in range(16)], ["y"])
        with pytest.raises(TooLarge):
            generate(big)

    def test_dump_golden(self):
        assert dump(generate(fl(["A", "B"]))) == (
            "0 : { A } ; above: [2]\n"
            "1 : { B } ; above: [2]\n"
            "2 : { A ; B } ; above: []\n")


class TestInvariants:
    def test_rejects_reflexive_preference(self):
        with pytest.raises(ValueError):
            EpistemicState({0}, {0: set()}, {(0, 0)})

    def test_rejects_intransitive_preference(self):
        with pytest.raises(ValueError):
            EpistemicState({0, 1, 2}, {0: set(), 1: set(), 2: set()}, {(0, 1), (1, 2)})


class TestBeliefs:
    def test_two_theories(self):
        summary = belief_summary(generate(fl(["A"], ["B"])))
        assert logic.equivalent(summary.belief_formula, parse_formula("A | B"))
        assert summary.maximal_states == {s("A"), s("B")}

    def test_unique_maximum(self):
        summary = belief_summary(generate(fl(["A", "B"])))
        assert logic.equivalent(summary.belief_formula, parse_formula("A & B"))

    def test_example_1(self):
        E = generate(fl([NNA], ["A", "B"]))
        assert believes(E, A)
        assert not believes(E, "A & B")

    def test_no_states(self):
        E = EpistemicState(frozenset(), {})
        assert belief_summary(E).belief_formula == logic.TOP


class TestPredicates:
    @given(oracles.flocks())
    def test_generated_states_are_persistent(self, F):
        assert is_persistent(generate(F))
        assert is_persistent(generate(F, include_empty=True))

    def test_non_persistent(self):
        E = EpistemicState({0, 1}, {0: {A}, 1: {B}}, {(0, 1)})
        assert not is_persistent(E)
        assert is_persistent(EpistemicState({0}, {0: {A}}))

    def test_pure(self):
        assert is_pure(generate(fl(["A", "B"])))
        assert not is_pure(generate(fl([NNA], ["A", "B"])))
        assert is_pure(EpistemicState({0, 1}, {0: {A}, 1: {B}}))

    def test_determinate(self):
        assert is_determinate(generate(fl(["A", "B"])))
        assert not is_determinate(generate(fl(["A"], ["B"])))
        assert is_determinate(EpistemicState({0}, {0: {A}}))

    @settings(max_examples=200)
    @given(oracles.flocks())
    def test_persistence_axiom_restated(self, F):
        E = generate(F)
        for low, high in E.prefer:
            assert all(logic.entails(E.label[high], c) for c in E.label[low])


class TestContractEstate:
    def test_niamey(self):
        E = contract_estate(generate(fl(["A", "B"])), "A & B")
        assert E.states == {s("A"), s("B")}
        E = contract_estate(E, A)
        assert E.states == {s("B")}
        assert believes(E, B)

    def test_falsum_removes_only_inconsistent_labels(self):
        E = generate(fl(["A", "~A"]))
        assert contract_estate(E, logic.BOTTOM).states == {s("A"), s("~A")}

    def test_tautology(self):
        with pytest.raises(TautologyContraction):
            contract_estate(generate(fl(["A"])), "A | ~A")

    @settings(max_examples=200)
    @given(oracles.flocks(), oracles.formulas(("p", "q", "r"), max_leaves=4))
    def test_matches_flock_contraction(self, F, f):
        if logic.is_tautology(f):
            return
        raw = remainder_flock(F, f)
        E = contract_estate(generate(F, include_empty=True), f)
        assert E == generate(raw, include_empty=True)


class TestMerge:
    def test_lemma_2_instance(self):
        E = pure_merge(generate(fl(["A"]), True), generate(fl(["B"]), True))
        assert isomorphic(E, generate(fl(["A", "B"]), True))

    def test_without_bottom_states_product_is_smaller(self):
        # Nonempty-subset states alone do not multiply out to the union base.
        E = pure_merge(generate(fl(["A"])), generate(fl(["B"])))
        assert len(E.states) == 1
        assert not isomorphic(E, generate(fl(["A", "B"])))

    def test_overlapping_bases_are_not_isomorphic(self):
        E = pure_merge(generate(fl(["A"]), True), generate(fl(["A", "B"]), True))
        assert not isomorphic(E, generate(fl(["A", "B"]), True))

    def test_symmetric(self):
        E1, E2 = generate(fl(["A"], ["B"]), True), generate(fl(["C"]), True)
        assert isomorphic(pure_merge(E1, E2), pure_merge(E2, E1))

    @settings(max_examples=60, deadline=None)
    @given(oracles.flocks(("p", "q"), max_size=2), oracles.flocks(("r", "s"), max_size=2))
    def test_theorem_1(self, F, G):
        if formulas_of(F) & formulas_of(G):
            return
        E = pure_merge(generate(F, True), generate(G, True))
        assert isomorphic(E, generate(merge(F, G), True))

    def test_lemma_3(self):
        cfg = TrialConfig()
        rng = random.Random(7)
        for _ in range(100):
            E1 = random_persistent_state(rng, cfg, ("p", "q", "r"))
            E2 = random_persistent_state(rng, cfg, ("p", "q", "r"))
            assert is_persistent(pure_merge(E1, E2))

    def test_guard(self):
        E = generate(fl([f"x{i}" for i in range(9)]))
        with pytest.raises(TooLarge):
            pure_merge(E, E)


class TestExpandEstate:
    def test_belief_law(self):
        E = generate(fl(["A"], ["B"]))
        got = belief_summary(expand_estate(E, "C")).belief_formula
        assert logic.equivalent(got, parse_formula("(A | B) & C"))

    def test_corollary_for_bases(self):
        E = expand_estate(generate(fl(["A"]), True), B)
        assert isomorphic(E, generate(fl(["A", "B"]), True))

    def test_tautology_keeps_beliefs(self):
        E = generate(fl(["A"], ["B"]))
        before = belief_summary(E).belief_formula
        after = belief_summary(expand_estate(E, "true")).belief_formula
        assert logic.equivalent(before, after)

    @settings(max_examples=100, deadline=None)
    @given(oracles.flocks(), oracles.formulas(("p", "q", "r"), max_leaves=4))
    def test_corollary_for_flocks(self, F, f):
        if any(f in b for b in F):
            return
        E = expand_estate(generate(F, True), f)
        assert isomorphic(E, generate(expand(F, f).flock, True))


class TestIsomorphic:
    def test_examples(self):
        assert isomorphic(generate(fl(["A"])), generate(fl([NNA])))
        assert not isomorphic(generate(fl(["A"], ["B"])), generate(fl(["A", "B"])))
        assert not isomorphic(generate(fl(["A"])), generate(fl(["B"])))

    def test_same_shape_different_labels(self):
        assert not isomorphic(generate(fl(["A", "B"])), generate(fl(["A", "~B"])))

    @settings(max_examples=150, deadline=None)
    @given(oracles.flocks(("p", "q")), oracles.flocks(("p", "q")))
    def test_agrees_with_networkx(self, F, G):
        E1, E2 = generate(F, True), generate(G, True)
        assert isomorphic(E1, E2) == nx_isomorphic(E1, E2)

    @settings(max_examples=50, deadline=None)
    @given(oracles.flocks(("p", "q", "r")))
    def test_relabelled_copy(self, F):
        E = generate(F, True)
        states = sorted(E.states, key=repr)
        rename = {st: i for i, st in enumerate(reversed(states))}
        copy = EpistemicState(
            set(rename.values()),
            {rename[st]: {Not(Not(g)) for g in E.label[st]} for st in E.states},
            {(rename[a], rename[b]) for a, b in E.prefer})
        assert isomorphic(E, copy)


class TestBehaviouralEquivalence:
    def test_example_4_reduction(self):
        E1 = generate(fl([NNB, "A"], [NNB, "B"]))
        E2 = generate(fl([NNB, "A"], ["B"]))
        assert behaviorally_equivalent(E1, E2, depth=2)

    def test_example_4_collapse(self):
        assert behaviorally_equivalent(generate(fl(["B"], ["B", "A"])),
                                       generate(fl(["A", "B"])), depth=2)

    def test_different_beliefs(self):
        assert not behaviorally_equivalent(generate(fl(["A"])), generate(fl(["B"])), 2)

    def test_separated_only_by_contraction(self):
        # Same beliefs now (A & B), different after contracting B.
        E1 = generate(fl(["A", "B"]))
        E2 = generate(fl(["A & B"]))
        assert behaviorally_equivalent(E1, E2, depth=0)
        assert not behaviorally_equivalent(E1, E2, depth=1)

    def test_signature_limit(self):
        E = generate(fl(["p", "q", "r", "s"]))
        with pytest.raises(SignatureTooLarge):
            behaviorally_equivalent(E, E)
