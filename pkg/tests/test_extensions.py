import sys
from pathlib import Path

import pytest

from cohomotopy.abelian import FinAbGroup
from cohomotopy.extensions import (
    EhpInjectivity,
    ElementOrderLift,
    EnumerationBoundError,
    ExtensionError,
    ExtensionProblem,
    ExternalFact,
    RelationFact,
    Retraction,
    UnresolvedExtensionError,
    apply_evidence,
    conjugate_partition,
    enumerate_middle_groups,
    ext_group,
    lr_positive,
    partitions,
)

sys.path.insert(0, str(Path(__file__).parent))
from oracles import oracle_middle_groups  # noqa: E402


def G(*orders):
    return FinAbGroup.from_factors(orders)


class TestExtGroup:
    def test_basic_values(self):
        assert ext_group(G(0), G(4)) == G()
        assert ext_group(G(4), G(0)) == G(4)
        assert ext_group(G(4), G(6)) == G(2)
        assert ext_group(G(2, 2), G(4, 3)) == G(2, 2)


class TestPartitions:
    def test_count(self):
        assert len(list(partitions(6))) == 11
        assert list(partitions(0)) == [()]

    def test_conjugate(self):
        assert conjugate_partition((3, 1)) == (2, 1, 1)
        assert conjugate_partition(conjugate_partition((4, 2, 1))) == (4, 2, 1)
        assert conjugate_partition(()) == ()


class TestLRPositivity:
    def test_pieri_examples(self):
        assert lr_positive((2,), (1,), (1,))
        assert lr_positive((1, 1), (1,), (1,))
        assert not lr_positive((2, 1), (1,), (1,))  # weight mismatch
        assert lr_positive((2, 1), (1, 1), (1,))
        assert lr_positive((2, 1), (2,), (1,))
        assert not lr_positive((3,), (1, 1), (1,))  # mu not inside lam

    def test_containment_required(self):
        assert not lr_positive((2, 2), (3,), (1,))

    def test_symmetry_under_conjugation(self):
        for lam in partitions(5):
            for mu in partitions(3):
                for nu in partitions(2):
                    assert lr_positive(lam, mu, nu) == lr_positive(
                        conjugate_partition(lam),
                        conjugate_partition(mu),
                        conjugate_partition(nu),
                    )


class TestEnumeration:
    def test_z2_by_z2(self):
        cands = enumerate_middle_groups(G(2), G(2))
        assert set(cands.candidates) == {G(4), G(2, 2)}

    def test_free_rank_adds(self):
        cands = enumerate_middle_groups(G(0, 2), G(0))
        assert set(cands.candidates) == {G(0, 0, 2)}

    def test_mixed_primes_decompose(self):
        cands = enumerate_middle_groups(G(2, 3), G(2))
        assert set(cands.candidates) == {G(4, 3), G(2, 2, 3)}

    def test_bound(self):
        with pytest.raises(EnumerationBoundError):
            enumerate_middle_groups(G(2**11), G(2**11), bound=2**20)

    def test_oracle_agreement_small(self):
        groups = [G(), G(2), G(4), G(2, 2), G(8), G(4, 2), G(2, 2, 2),
                  G(3), G(9), G(3, 3), G(6), G(12)]
        for a in groups:
            for c in groups:
                got = set(enumerate_middle_groups(a, c).candidates)
                assert got == oracle_middle_groups(a, c), (a, c)


class TestApplyEvidence:
    def test_retraction_splits(self):
        problem = ExtensionProblem(
            sub=((4, "x"),), quot=((4, "y"),), context="t"
        )
        r = apply_evidence(problem, [Retraction(sections=(("y", "lift(y)"),))])
        assert r.group == G(4, 4)
        assert r.generators == ((4, "x"), (4, "lift(y)"))

    def test_retraction_default_names(self):
        problem = ExtensionProblem(sub=(), quot=((2, "y"),), context="t")
        r = apply_evidence(problem, [Retraction()])
        assert r.generators == ((2, "ext(y)"),)

    def test_order_lift_split(self):
        problem = ExtensionProblem(
            sub=((4, "a"),), quot=((2, "c"),), context="t"
        )
        r = apply_evidence(
            problem, [ElementOrderLift("L", 2, maps_to="c")]
        )
        assert r.group == G(4, 2)
        assert r.generators == ((4, "a"), (2, "L"))

    def test_order_lift_fuse(self):
        problem = ExtensionProblem(
            sub=((4, "a"),), quot=((2, "c"),), context="t"
        )
        r = apply_evidence(
            problem, [ElementOrderLift("L", 8, maps_to="c", absorbs="a")]
        )
        assert r.group == G(8)
        assert r.generators == ((8, "L"),)

    def test_order_lift_fuse_with_remainder(self):
        problem = ExtensionProblem(
            sub=((4, "a"),), quot=((4, "c"),), context="t"
        )
        r = apply_evidence(
            problem,
            [ElementOrderLift("L", 8, maps_to="c", absorbs="a", remainder_name="R")],
        )
        assert r.group == G(8, 2)
        assert r.generators == ((8, "L"), (2, "R"))

    def test_relation_fact(self):
        # 0 -> Z/4{a} -> G -> Z/2{c} -> 0 with 2*L = a: L has order 8
        problem = ExtensionProblem(
            sub=((4, "a"),), quot=((2, "c"),), context="t"
        )
        r = apply_evidence(
            problem,
            [RelationFact("L", lift_of="c", multiplier=2, rhs="a")],
        )
        assert r.group == G(8)
        assert r.generators == ((8, "L"),)

    def test_relation_fact_with_rhs_mult_and_remainder(self):
        # 2*L = 2*a with a of order 4: L has order 4, Z/2 remainder survives
        problem = ExtensionProblem(
            sub=((4, "a"),), quot=((2, "c"),), context="t"
        )
        r = apply_evidence(
            problem,
            [RelationFact("L", lift_of="c", multiplier=2, rhs="a",
                          rhs_mult=2, remainder_name="R")],
        )
        assert r.group == G(4, 2)
        assert r.generators == ((4, "L"), (2, "R"))

    def test_relation_multiplier_must_match_order(self):
        problem = ExtensionProblem(
            sub=((4, "a"),), quot=((2, "c"),), context="t"
        )
        with pytest.raises(ExtensionError):
            apply_evidence(
                problem,
                [RelationFact("L", lift_of="c", multiplier=4, rhs="a")],
            )

    def test_external_fact(self):
        problem = ExtensionProblem(
            sub=((2, "a"),), quot=((2, "c"),), context="t"
        )
        r = apply_evidence(
            problem, [ExternalFact(factors=((4, "g"),))]
        )
        assert r.group == G(4)

    def test_coprime_auto_split(self):
        problem = ExtensionProblem(
            sub=((3, "a"),), quot=((2, "c"),), context="t"
        )
        r = apply_evidence(problem, [])
        assert r.group == G(6)
        assert r.generators == ((3, "a"), (2, "ext(c)"))

    def test_unresolved_without_evidence(self):
        problem = ExtensionProblem(
            sub=((2, "a"),), quot=((2, "c"),), context="t"
        )
        with pytest.raises(UnresolvedExtensionError) as exc:
            apply_evidence(problem, [])
        assert set(exc.value.candidates) == {G(4), G(2, 2)}

    def test_inconsistent_lift_order(self):
        problem = ExtensionProblem(
            sub=((2, "a"),), quot=((2, "c"),), context="t"
        )
        with pytest.raises(ExtensionError):
            apply_evidence(problem, [ElementOrderLift("L", 3, maps_to="c")])

    def test_claimed_group_outside_candidates(self):
        problem = ExtensionProblem(
            sub=((2, "a"),), quot=((2, "c"),), context="t"
        )
        with pytest.raises(ExtensionError):
            apply_evidence(problem, [ExternalFact(factors=((8, "g"),))])

    def test_infinite_lift(self):
        problem = ExtensionProblem(
            sub=((4, "a"),), quot=((0, "z"),), context="t"
        )
        r = apply_evidence(problem, [ElementOrderLift("L", None, maps_to="z")])
        assert r.group == G(0, 4)
        assert (0, "L") in r.generators

    def test_ehp_item_is_not_consumed_here(self):
        # the solver itself ignores transport items; with nothing else the
        # problem stays unresolved
        problem = ExtensionProblem(
            sub=((2, "a"),), quot=((2, "c"),), context="t"
        )
        with pytest.raises(UnresolvedExtensionError):
            apply_evidence(problem, [EhpInjectivity(source_n=9)])
