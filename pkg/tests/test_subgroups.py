import itertools
import random
import unittest

import pytest

from maxnorm import catalog
from maxnorm.config import Caps
from maxnorm.errors import BudgetExhaustedError, PreconditionError
from maxnorm.lattice import lattice_of
from maxnorm.perm_core import (
    conjugate_subgroup,
    elements,
    equal_groups,
    generated,
    is_subgroup,
    key_of,
    parse_cycles,
    random_elements,
)
from maxnorm.subgroups import (
    centralizer,
    conjugates,
    core,
    hall,
    intersection,
    is_normal,
    minimal_normal_subgroups,
    normal_closure,
    normalizer,
    o_p,
    o_pi,
    preimage,
    quotient,
    sylow,
    trivial,
)


def perm(text, degree=4):
    return parse_cycles(text, degree)


def group(*texts, degree=4):
    return generated([perm(t, degree) for t in texts], degree)


# Forces the backtrack regime on groups small enough to check by hand.
BACKTRACK = Caps(brute_force=4)


def normalizer_keys(G, H):
    return {key_of(g) for g in elements(G) if all(H.has(h ^ g) for h in H.generators)}


def centralizer_keys(G, H):
    return {key_of(g) for g in elements(G) if all(key_of(g * h) == key_of(h * g) for h in H.generators)}


def core_keys(G, H):
    conjugators = list(elements(G))
    return {key_of(h) for h in elements(H) if all(H.has(h ^ g) for g in conjugators)}


class TestCentralizerNormalizer(unittest.TestCase):
    def setUp(self):
        self.s4 = catalog.build("S4")
        self.c3 = group("(1 2 3)")
        self.d8 = group("(1 2 3 4)", "(1 3)")

    def test_centralizer_of_a_three_cycle(self):
        C = centralizer(self.s4, self.c3)
        self.assertTrue(equal_groups(C, self.c3))
        self.assertTrue(equal_groups(centralizer(self.s4, trivial(self.s4)), self.s4))
        c6 = catalog.build("C6")
        self.assertTrue(equal_groups(centralizer(c6, c6), c6))

    def test_normalizer_of_a_three_cycle_is_the_point_stabilizer(self):
        N = normalizer(self.s4, self.c3)
        self.assertEqual(N.order.value, 6)
        self.assertTrue(equal_groups(N, group("(1 2)", "(1 2 3)")))
        self.assertTrue(equal_groups(normalizer(self.s4, self.s4), self.s4))

    def test_sylow_two_subgroup_is_self_normalizing(self):
        self.assertTrue(equal_groups(normalizer(self.s4, self.d8), self.d8))

    def test_backtrack_regime_agrees(self):
        self.assertTrue(equal_groups(normalizer(self.s4, self.c3, BACKTRACK), normalizer(self.s4, self.c3)))
        self.assertTrue(equal_groups(normalizer(self.s4, self.d8, BACKTRACK), self.d8))
        self.assertTrue(equal_groups(centralizer(self.s4, self.c3, BACKTRACK), self.c3))
        meet = intersection(self.d8, group("(1 2)", "(1 2 3)"), BACKTRACK)
        self.assertTrue(equal_groups(meet, intersection(self.d8, group("(1 2)", "(1 2 3)"))))

    def test_requires_a_subgroup(self):
        with self.assertRaises(PreconditionError):
            normalizer(group("(1 2 3)"), group("(1 2)"))


class TestClosureCoreConjugates(unittest.TestCase):
    def setUp(self):
        self.s4 = catalog.build("S4")
        self.v4 = group("(1 2)(3 4)", "(1 3)(2 4)")

    def test_normal_closure(self):
        self.assertEqual(normal_closure(self.s4, [perm("(1 2)")]).order.value, 24)
        self.assertTrue(equal_groups(normal_closure(self.s4, [perm("(1 2)(3 4)")]), self.v4))
        self.assertTrue(normal_closure(self.s4, [perm("()")]).is_trivial)

    def test_normal_closure_generators_are_reproducible(self):
        first = normal_closure(self.s4, [perm("(1 2)(3 4)")])
        second = normal_closure(self.s4, [perm("(1 2)(3 4)")])
        self.assertEqual([g.array_form for g in first.generators], [g.array_form for g in second.generators])

    def test_core(self):
        d8 = group("(1 2 3 4)", "(1 3)")
        self.assertTrue(equal_groups(core(self.s4, d8), self.v4))
        self.assertTrue(core(self.s4, group("(1 2)", "(1 2 3)")).is_trivial)
        self.assertTrue(equal_groups(core(self.s4, self.s4), self.s4))

    def test_intersection(self):
        s3 = group("(1 2)", "(1 2 3)")
        a4 = group("(1 2 3)", "(2 3 4)")
        self.assertEqual(intersection(s3, a4).order.value, 3)
        self.assertTrue(intersection(s3, self.v4).is_trivial)

    def test_conjugates_and_budget(self):
        pool = conjugates(self.s4, group("(1 2 3)"))
        self.assertEqual(len(pool), 4)
        self.assertEqual(len(conjugates(self.s4, self.v4)), 1)
        with self.assertRaises(BudgetExhaustedError):
            conjugates(self.s4, group("(1 2 3)"), budget=2)

    def test_is_normal(self):
        self.assertTrue(is_normal(self.s4, self.v4))
        self.assertFalse(is_normal(self.s4, group("(1 2)")))


class TestSylowHall(unittest.TestCase):
    def test_sylow_orders(self):
        s4 = catalog.build("S4")
        P = sylow(s4, 2)
        self.assertEqual(P.order.value, 8)
        self.assertTrue(is_subgroup(P, s4))
        self.assertTrue(sylow(s4, 5).is_trivial)
        with self.assertRaises(PreconditionError):
            sylow(s4, 4)

    def test_sylow_in_psl217(self):
        G = catalog.build("PSL2_17")
        self.assertEqual(sylow(G, 2).order.value, 16)
        self.assertEqual(sylow(G, 3).order.value, 9)
        self.assertEqual(sylow(G, 17).order.value, 17)

    def test_sylow_is_deterministic(self):
        G = catalog.build("S4xC2")
        first = sylow(G, 2, seed=7)
        self.assertEqual([g.array_form for g in first.generators], [g.array_form for g in sylow(G, 2, seed=7).generators])

    def test_hall_orders(self):
        self.assertEqual(hall(catalog.build("C30"), [2, 3]).subgroup.order.value, 6)
        s4 = catalog.build("S4")
        self.assertEqual(hall(s4, [2, 3]).subgroup.order.value, 24)
        self.assertEqual(hall(s4, [3]).subgroup.order.value, 3)
        agl = catalog.build("AGL1_7")
        K = hall(agl, [2, 3])
        self.assertEqual(K.subgroup.order.value, 6)
        self.assertTrue(is_subgroup(K.normalizer, agl))

    def test_hall_in_a_direct_product(self):
        G = catalog.build("S3xC5")
        K = hall(G, [2, 5]).subgroup
        self.assertEqual(K.order.value, 10)
        self.assertTrue(is_subgroup(K, G))

    def test_hall_needs_pi_separability(self):
        with self.assertRaises(PreconditionError):
            hall(catalog.build("A5"), [2, 3])


class TestCoresAndQuotients(unittest.TestCase):
    def setUp(self):
        self.s4 = catalog.build("S4")
        self.v4 = group("(1 2)(3 4)", "(1 3)(2 4)")

    def test_o_p(self):
        self.assertTrue(equal_groups(o_p(self.s4, 2), self.v4))
        self.assertTrue(o_p(self.s4, 3).is_trivial)
        e8 = catalog.build("E8")
        self.assertTrue(equal_groups(o_p(e8, 2), e8))

    def test_o_pi(self):
        self.assertTrue(equal_groups(o_pi(self.s4, [2, 3]), self.s4))
        self.assertTrue(o_pi(catalog.build("S3"), [2]).is_trivial)
        a5 = catalog.build("A5")
        self.assertTrue(equal_groups(o_pi(a5, [2, 3, 5]), a5))
        self.assertTrue(equal_groups(o_pi(self.s4, [2]), self.v4))

    def test_minimal_normal_subgroups(self):
        found = minimal_normal_subgroups(self.s4)
        self.assertEqual(len(found), 1)
        self.assertTrue(equal_groups(found[0], self.v4))
        self.assertEqual([M.order.value for M in minimal_normal_subgroups(catalog.build("A5"))], [60])
        self.assertEqual(sorted(M.order.value for M in minimal_normal_subgroups(catalog.build("C6"))), [2, 3])

    def test_quotient_by_the_klein_group(self):
        qp = quotient(self.s4, self.v4)
        Q = qp.quotient
        self.assertEqual(Q.order.value, 6)
        self.assertEqual(Q.degree, 6)
        self.assertFalse(Q.group.is_abelian)

    def test_quotient_extremes(self):
        whole = quotient(self.s4, trivial(self.s4)).quotient
        self.assertEqual((whole.order.value, whole.degree), (24, 24))
        self.assertTrue(quotient(self.s4, self.s4).quotient.is_trivial)
        with self.assertRaises(PreconditionError):
            quotient(self.s4, group("(1 2)"))

    def test_backtrack_quotient_matches(self):
        qp = quotient(self.s4, self.v4, Caps(brute_force=8))
        self.assertEqual(qp.quotient.order.value, 6)
        self.assertEqual(qp.image(group("(1 2 3)")).order.value, 3)

    def test_preimage(self):
        qp = quotient(self.s4, self.v4)
        self.assertTrue(equal_groups(preimage(qp, trivial(qp.quotient)), self.v4))
        self.assertTrue(equal_groups(preimage(qp, qp.quotient), self.s4))
        two = qp.image(group("(1 2)"))
        self.assertEqual(two.order.value, 2)
        lifted = preimage(qp, two)
        self.assertEqual(lifted.order.value, 8)
        self.assertTrue(is_subgroup(lifted, self.s4))


class TestRepeatedSearches(unittest.TestCase):
    def test_normalizer_then_centralizer_on_the_same_subgroup(self):
        for name in ("S4", "A4", "D8", "AGL1_5", "S3xS3", "SL2_3"):
            G = catalog.build(name)
            g_base = G.base
            lattice = lattice_of(G)
            for cls in lattice.classes:
                H = lattice.representative(cls)
                h_base, h_keys = H.base, H.element_keys
                N = normalizer(G, H, BACKTRACK)
                C = centralizer(G, H, BACKTRACK)
                self.assertEqual(set(N.element_keys), normalizer_keys(G, H), (name, cls.order))
                self.assertEqual(set(C.element_keys), centralizer_keys(G, H), (name, cls.order))
                # a second round on the same objects must see the same groups
                self.assertEqual(normalizer(G, H, BACKTRACK).element_keys, N.element_keys)
                self.assertEqual(centralizer(G, H, BACKTRACK).element_keys, C.element_keys)
                self.assertEqual(tuple(G.group.base), g_base)
                self.assertEqual(tuple(H.group.base), h_base)
                for g in elements(G):
                    self.assertEqual(bool(H.group.contains(g)), key_of(g) in h_keys)

    def test_quotient_leaves_its_inputs_alone(self):
        s4 = catalog.build("S4")
        v4 = group("(1 2)(3 4)", "(1 3)(2 4)")
        bases = (s4.base, v4.base)
        quotient(s4, v4, Caps(brute_force=8))
        self.assertEqual((tuple(s4.group.base), tuple(v4.group.base)), bases)
        self.assertTrue(equal_groups(centralizer(s4, v4, BACKTRACK), v4))


@pytest.mark.slow
class TestOraclesAcrossTheCatalog(unittest.TestCase):
    def test_normalizer_centralizer_core_in_both_regimes(self):
        for name in catalog.names():
            if catalog.entry(name).order > 500:
                continue
            G = catalog.build(name)
            lattice = lattice_of(G)
            for cls in lattice.classes:
                H = lattice.representative(cls)
                expected = (normalizer_keys(G, H), centralizer_keys(G, H), core_keys(G, H))
                for caps in (None, BACKTRACK):
                    found = (normalizer(G, H, caps), centralizer(G, H, caps), core(G, H, caps))
                    self.assertEqual(tuple(set(X.element_keys) for X in found), expected, (name, cls.order, caps))


class TestSubgroupInvariants(unittest.TestCase):
    def test_sylow_subgroups_are_conjugate(self):
        cases = [("S4xC2", 2), ("S4xC2", 3), ("AGL1_13", 2), ("A4xC3", 3), ("SL2_3", 2)]
        for i in range(50):
            name, p = cases[i % len(cases)]
            G = catalog.build(name)
            P, Q = sylow(G, p, seed=i), sylow(G, p, seed=i + 50)
            self.assertEqual(P.order.value, G.order.p_part(p))
            self.assertTrue(any(equal_groups(X, Q) for X in conjugates(G, P)), (name, p, i))

    def test_projection_is_a_homomorphism(self):
        for name, kernel in (("S4", lambda G: o_p(G, 2)), ("AGL1_5", lambda G: o_p(G, 5)), ("S3xS3", lambda G: o_p(G, 3))):
            G = catalog.build(name)
            N = kernel(G)
            for caps in (None, Caps(brute_force=8)):
                qp = quotient(G, N, caps)
                draws = random_elements(G, random.Random(3))
                for _ in range(100):
                    g, h = next(draws), next(draws)
                    self.assertEqual(key_of(qp.project(g * h)), key_of(qp.project(g) * qp.project(h)), (name, caps))
                for n in N.generators:
                    self.assertTrue(qp.project(n).is_Identity)

    def test_o_pi_is_the_largest_normal_pi_subgroup(self):
        for name in ("S4", "A4xC3", "AGL1_7", "D12", "S3xS3"):
            G = catalog.build(name)
            lattice = lattice_of(G)
            normal = [lattice.representative(cls) for cls in lattice.classes if cls.is_normal]
            for pi in ([2], [3], [2, 3], [7]):
                O = o_pi(G, pi)
                self.assertTrue(is_normal(G, O), (name, pi))
                self.assertTrue(O.order.is_pi_number(pi), (name, pi))
                for K in normal:
                    if K.order.is_pi_number(pi):
                        self.assertTrue(is_subgroup(K, O), (name, pi, K.order.value))

    def test_conjugating_a_sylow_keeps_it_sylow(self):
        G = catalog.build("S4")
        P = sylow(G, 2)
        for g in itertools.islice(elements(G), 10):
            image = conjugate_subgroup(P, g)
            self.assertTrue(is_subgroup(image, G))
            self.assertEqual(image.order.value, 8)


if __name__ == '__main__':
    unittest.main()
