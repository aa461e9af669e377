import unittest
from unittest.mock import patch

import pytest

from maxnorm import catalog
from maxnorm.config import Caps
from maxnorm.errors import BudgetExhaustedError, PreconditionError
from maxnorm.harness import (
    TheoremId,
    Verdict,
    check_lemma_1,
    check_lemma_2,
    check_lemma_3,
    hall_witness_search,
    psl217_counterexample_demo,
    recheck_witness,
    sweep_lemmas,
    sylow_witness_search,
    verify_corollary_1_1,
    verify_corollary_1_2,
    verify_theorem_1,
    verify_theorem_2,
    verify_theorem_3,
    verify_theorem_A,
)
from maxnorm.perm_core import PrimeSet, equal_groups, generated, parse_cycles
from maxnorm.subgroups import trivial


def group(*texts, degree=4):
    return generated([parse_cycles(t, degree) for t in texts], degree)


def all_checks_hold(report):
    return all(ok for _, ok in report.checks) and all(ok for i in report.instances for _, ok in i.checks)


class TestTheoremIds(unittest.TestCase):
    def test_parse(self):
        self.assertIs(TheoremId.parse("1.1"), TheoremId.C11)
        self.assertIs(TheoremId.parse("A"), TheoremId.A)
        self.assertEqual(TheoremId.C12.label, "Corollary 1.2")
        self.assertEqual(TheoremId.T3.label, "Theorem 3")
        with self.assertRaises(PreconditionError):
            TheoremId.parse("4")


class TestWitnessSearch(unittest.TestCase):
    def setUp(self):
        self.s4 = catalog.build("S4")
        self.s3 = group("(1 2)", "(1 2 3)")

    def test_sylow_three_inside_the_point_stabilizer(self):
        found = sylow_witness_search(self.s4, self.s3, 3)
        self.assertTrue(found.contained)
        self.assertEqual(found.subgroup.order.value, 3)
        self.assertTrue(equal_groups(found.normalizer, self.s3))
        self.assertEqual(found.checks, [("conjugate scan over 4 subgroups agrees", True)])

    def test_sylow_two_missing_from_the_point_stabilizer(self):
        found = sylow_witness_search(self.s4, self.s3, 2)
        self.assertFalse(found.contained)
        self.assertEqual(found.status, "no_witness")
        self.assertIn("no Sylow 2-subgroup", found.note)
        self.assertTrue(all(ok for _, ok in found.checks))

    def test_hall_witness(self):
        agl = catalog.build("AGL1_7")
        stabilizer = generated(list(agl.generators[1:]), agl.degree)
        found = hall_witness_search(agl, stabilizer, PrimeSet.of([2, 3]))
        self.assertEqual(found.subgroup.order.value, 6)
        self.assertTrue(found.contained)

    def test_truncated_cross_check_only_adds_a_note(self):
        found = sylow_witness_search(self.s4, self.s3, 3, Caps(conjugates=1))
        self.assertTrue(found.contained)
        self.assertEqual(found.checks, [])
        self.assertIn("conjugate scan exceeded 1", found.note)


class TestTheoremA(unittest.TestCase):
    def test_s4(self):
        report = verify_theorem_A(catalog.build("S4"))
        self.assertEqual(report.verdict, Verdict.VERIFIED)
        self.assertEqual(sorted(i.maximal.order.value for i in report.instances), [6, 8])
        self.assertTrue(all(i.contained for i in report.instances))
        self.assertTrue(all_checks_hold(report))

    def test_cyclic_group_is_vacuous(self):
        report = verify_theorem_A(catalog.build("C5"))
        self.assertEqual(report.verdict, Verdict.VERIFIED)
        self.assertEqual(report.instances, [])

    def test_supplied_subgroup_must_be_maximal(self):
        with self.assertRaises(PreconditionError):
            verify_theorem_A(catalog.build("S4"), maximals=[group("(1 2)(3 4)", "(1 3)(2 4)")])

    def test_psl217_counterexample(self):
        report = psl217_counterexample_demo()
        self.assertEqual(report.verdict, Verdict.FAILED)
        self.assertEqual(report.hypotheses_checked, [("G is solvable", False)])
        self.assertEqual([i.q for i in report.instances], [2, 3, 17])
        self.assertTrue(all(not i.contained for i in report.instances))
        self.assertTrue(all(ok for _, ok in report.checks), report.checks)
        for p in (2, 3, 17):
            self.assertIn(f"p = {p}:", report.counterexample_details)
        self.assertIn("|G|_2 = 16 but |H|_2 = 8", report.counterexample_details)

    def test_psl217_setup_failure_is_inconclusive(self):
        with patch("maxnorm.perm_core.element_order_histogram", return_value={}):
            with self.assertLogs("maxnorm.harness", level="WARNING"):
                report = psl217_counterexample_demo()
        self.assertEqual(report.verdict, Verdict.INCONCLUSIVE)
        self.assertIn(("S4 has the element orders of the symmetric group", False), report.checks)
        self.assertTrue(any("S4 has the element orders of the symmetric group" in n for n in report.notes), report.notes)


class TestTheorem1(unittest.TestCase):
    def test_s4_instances(self):
        """S3 class with q = 3 (trivial core) and D8 class with q = 2 (core V4)."""
        report = verify_theorem_1(catalog.build("S4"))
        self.assertEqual(report.verdict, Verdict.VERIFIED)
        shape = [(i.maximal.order.value, i.core.order.value, i.q, i.contained) for i in report.instances]
        self.assertEqual(shape, [(6, 1, 3, True), (8, 4, 2, True)])
        self.assertEqual([i.class_size for i in report.instances], [4, 3])

    def test_a4(self):
        report = verify_theorem_1(catalog.build("A4"))
        self.assertEqual(report.verdict, Verdict.VERIFIED)
        [instance] = report.instances
        self.assertEqual((instance.maximal.order.value, instance.q), (3, 3))
        self.assertTrue(equal_groups(instance.witness_normalizer, instance.maximal))

    def test_nonsolvable_group(self):
        report = verify_theorem_1(catalog.build("A5"))
        self.assertEqual(report.verdict, Verdict.HYPOTHESES_NOT_MET)
        self.assertEqual(report.instances, [])

    def test_witnesses_recheck(self):
        G = catalog.build("S4xC2")
        report = verify_theorem_1(G)
        self.assertEqual(report.verdict, Verdict.VERIFIED)
        for instance in report.instances:
            for name, ok in recheck_witness(G, instance):
                self.assertTrue(ok, name)

    def test_budget_overrun_is_inconclusive(self):
        with patch("maxnorm.harness.sylow_witness_search", side_effect=BudgetExhaustedError("out of budget")):
            report = verify_theorem_1(catalog.build("S4"))
        self.assertEqual(report.verdict, Verdict.INCONCLUSIVE)
        self.assertTrue(all(i.status == "inconclusive" for i in report.instances))


class TestCorollaries(unittest.TestCase):
    def test_corollary_1_1_on_s4(self):
        report = verify_corollary_1_1(catalog.build("S4"))
        self.assertEqual(report.verdict, Verdict.VERIFIED)
        self.assertEqual([i.q for i in report.instances], [3, 2])
        self.assertTrue(all_checks_hold(report))
        self.assertEqual(report.skipped, [])

    def test_corollary_1_1_interval_cap_skips(self):
        report = verify_corollary_1_1(catalog.build("S4"), caps=Caps(interval=1))
        self.assertEqual(report.verdict, Verdict.VERIFIED)
        self.assertEqual(len(report.skipped), 1)
        self.assertEqual([i.status for i in report.instances], ["skipped", "found"])

    def test_corollary_1_2_on_s4(self):
        report = verify_corollary_1_2(catalog.build("S4"))
        self.assertEqual(report.verdict, Verdict.VERIFIED)
        self.assertEqual([i.pi for i in report.instances], [PrimeSet.of([3]), PrimeSet.of([2])])

    def test_corollary_1_2_with_two_fitting_primes(self):
        """In AGL(1,7) the point stabilizer C6 is core-free and nilpotent."""
        report = verify_corollary_1_2(catalog.build("AGL1_7"))
        self.assertEqual(report.verdict, Verdict.VERIFIED)
        omegas = [i.pi for i in report.instances]
        self.assertEqual(omegas, [PrimeSet.of([2]), PrimeSet.of([3]), PrimeSet.of([2, 3])])
        self.assertTrue(all(i.contained for i in report.instances))


class TestTheorem2(unittest.TestCase):
    def test_s4_p2(self):
        report = verify_theorem_2(catalog.build("S4"), 2)
        self.assertEqual(report.verdict, Verdict.VERIFIED)
        [instance] = report.instances
        self.assertEqual((instance.maximal.order.value, instance.q, instance.case), (6, 3, "F(M/Core) ≠ 1"))

    def test_s4_p3(self):
        report = verify_theorem_2(catalog.build("S4"), 3)
        self.assertEqual(report.verdict, Verdict.VERIFIED)
        [instance] = report.instances
        self.assertEqual((instance.maximal.order.value, instance.core.order.value, instance.q), (8, 4, 2))

    def test_vacuous_and_rejected(self):
        self.assertEqual(verify_theorem_2(catalog.build("C6"), 2).instances, [])
        self.assertEqual(verify_theorem_2(catalog.build("A5"), 2).verdict, Verdict.HYPOTHESES_NOT_MET)
        with self.assertRaises(PreconditionError):
            verify_theorem_2(catalog.build("S4"), 4)

    @pytest.mark.slow
    def test_affine_a5_hall_case(self):
        G = catalog.build("AffA5_F7")
        report = verify_theorem_2(G, 7, maximals=catalog.known_maximals(G))
        self.assertEqual(report.verdict, Verdict.VERIFIED)
        [instance] = report.instances
        self.assertEqual(instance.case, "F(M/Core) = 1")
        self.assertEqual(instance.pi, PrimeSet.of([2, 3, 5]))
        self.assertTrue(instance.contained)
        self.assertTrue(equal_groups(instance.witness_subgroup, instance.maximal))


class TestTheorem3(unittest.TestCase):
    def test_s4_pi_2_agrees_with_theorem_2(self):
        report = verify_theorem_3(catalog.build("S4"), [2])
        self.assertEqual(report.verdict, Verdict.VERIFIED)
        self.assertIn(("agrees with the Theorem 2 verifier at p = 2", True), report.checks)

    def test_non_nilpotent_hall(self):
        report = verify_theorem_3(catalog.build("S4"), [2, 3])
        self.assertEqual(report.verdict, Verdict.HYPOTHESES_NOT_MET)

    def test_nilpotent_group_agrees_with_theorem_1(self):
        report = verify_theorem_3(catalog.build("D8xC3"), [2, 3])
        self.assertEqual(report.verdict, Verdict.VERIFIED)
        self.assertIn(("agrees with the Theorem 1 verifier at π = π(G)", True), report.checks)

    def test_reduction_check_when_the_core_is_nontrivial(self):
        report = verify_theorem_3(catalog.build("S4"), [3])
        self.assertEqual(report.verdict, Verdict.VERIFIED)
        [instance] = report.instances
        self.assertIn(("normalizer maps onto the normalizer in G/Core_G M", True), instance.checks)


class TestLemmas(unittest.TestCase):
    def setUp(self):
        self.s4 = catalog.build("S4")
        self.a4 = group("(1 2 3)", "(2 3 4)")
        self.s3 = group("(1 2)", "(1 2 3)")
        self.v4 = group("(1 2)(3 4)", "(1 3)(2 4)")

    def test_lemma_1(self):
        self.assertTrue(check_lemma_1(self.s4, self.a4, [2]))
        self.assertTrue(check_lemma_1(self.s4, self.s3, [2]))
        self.assertTrue(check_lemma_1(self.s4, self.s4, [3]))
        with self.assertRaises(PreconditionError):
            check_lemma_1(self.s4, self.s3, [3])

    def test_lemma_2(self):
        self.assertTrue(check_lemma_2(self.s4, self.v4, [3]))
        self.assertTrue(check_lemma_2(self.s4, trivial(self.s4), [3]))
        self.assertTrue(check_lemma_2(self.s4, self.s4, [2]))
        with self.assertRaises(PreconditionError):
            check_lemma_2(self.s4, self.s3, [2])

    def test_lemma_3(self):
        self.assertTrue(check_lemma_3(self.s4, self.a4, [2]))
        self.assertTrue(check_lemma_3(self.s4, self.s3, [2]))
        with self.assertRaises(PreconditionError):
            check_lemma_3(self.s4, self.v4, [2])
        with self.assertRaises(PreconditionError):
            check_lemma_3(self.s4, self.s3, [2, 3])

    def test_sweep(self):
        report = sweep_lemmas(self.s4, name="S4")
        self.assertEqual(report.verdict, Verdict.VERIFIED)
        self.assertEqual({r.lemma for r in report.results}, {1, 2, 3})
        self.assertGreater(sum(report.excluded.values()), 0)


@pytest.mark.slow
@pytest.mark.parametrize("name", catalog.names("solvable"))
def test_solvable_catalog_sweep(name, build_group):
    G = build_group(name)
    for verify in (verify_theorem_A, verify_theorem_1, verify_corollary_1_1, verify_corollary_1_2):
        report = verify(G)
        assert report.verdict == Verdict.VERIFIED, (name, verify.__name__, report.notes)
    for p in G.order.primes:
        two = verify_theorem_2(G, p)
        three = verify_theorem_3(G, [p])
        assert two.verdict == Verdict.VERIFIED, (name, p)
        assert three.verdict == Verdict.VERIFIED, (name, p, three.checks)


@pytest.mark.slow
def test_lemma_two_over_many_instances(build_group):
    total = 0
    for name in catalog.names("solvable"):
        report = sweep_lemmas(build_group(name), name=name)
        assert report.verdict == Verdict.VERIFIED, name
        total += sum(1 for r in report.results if r.lemma == 2)
    assert total >= 200


if __name__ == '__main__':
    unittest.main()
