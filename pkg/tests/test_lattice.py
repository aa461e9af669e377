import unittest

from maxnorm import catalog
from maxnorm.config import Caps
from maxnorm.errors import CapExceededError, PreconditionError
from maxnorm.lattice import ElementTable, build_lattice, interval, lattice_of
from maxnorm.perm_core import FactoredInteger, generated, parse_cycles


def group(*texts, degree=4):
    return generated([parse_cycles(t, degree) for t in texts], degree)


class TestElementTable(unittest.TestCase):
    def test_multiply_is_left_to_right(self):
        s3 = catalog.build("S3")
        table = ElementTable(s3, 10)
        a = table.lookup(parse_cycles("(1 2)", 3))
        b = table.lookup(parse_cycles("(2 3)", 3))
        self.assertEqual(table.permutation(table.multiply(a, b)).array_form, parse_cycles("(1 3 2)", 3).array_form)

    def test_closure(self):
        table = ElementTable(catalog.build("S4"), 100)
        c = table.lookup(parse_cycles("(1 2 3 4)", 4))
        self.assertEqual(len(table.closure([c])), 4)
        self.assertIsNone(table.closure([c, table.lookup(parse_cycles("(1 2)", 4))], limit=10))


class TestLattice(unittest.TestCase):
    def test_subgroup_counts(self):
        """S4 has 30 subgroups in 11 classes; A4 has 10 in 5; C12 has 6."""
        for name, subgroups, classes in (("S4", 30, 11), ("A4", 10, 5), ("C12", 6, 6), ("S3", 6, 4)):
            lattice = build_lattice(catalog.build(name))
            self.assertEqual(lattice.subgroup_count, subgroups, name)
            self.assertEqual(len(lattice.classes), classes, name)

    def test_classes_are_sorted_and_closed_under_conjugation(self):
        lattice = build_lattice(catalog.build("S4"))
        self.assertEqual(lattice.classes[0].order, 1)
        self.assertEqual(lattice.classes[-1].order, 24)
        orders = [c.order for c in lattice.classes]
        self.assertEqual(orders, sorted(orders))
        three = [c for c in lattice.classes if c.order == 3]
        self.assertEqual([c.size for c in three], [4])

    def test_representatives_have_the_class_order(self):
        lattice = build_lattice(catalog.build("D12"))
        for cls in lattice.classes:
            self.assertEqual(lattice.representative(cls).order.value, cls.order)

    def test_index_is_multiplicative(self):
        for name in ("S4", "SL2_3", "D12"):
            G = catalog.build(name)
            lattice = lattice_of(G)
            keys = [key for key, _ in lattice.all_subgroups()]
            for H in keys:
                for K in keys:
                    if not K <= H:
                        continue
                    whole = G.order.index(FactoredInteger.of(len(K)))
                    upper = G.order.index(FactoredInteger.of(len(H)))
                    lower = FactoredInteger.of(len(H)).index(FactoredInteger.of(len(K)))
                    self.assertEqual(whole.value, upper.value * lower.value, name)
                    self.assertEqual(len(H) % len(K), 0, name)

    def test_cached_per_group_object(self):
        G = catalog.build("A4")
        self.assertIs(lattice_of(G), lattice_of(G))

    def test_caps(self):
        with self.assertRaises(CapExceededError):
            build_lattice(catalog.build("S4"), Caps(order=10))
        with self.assertRaises(CapExceededError):
            build_lattice(catalog.build("E16"), Caps(subgroups=10))


class TestInterval(unittest.TestCase):
    def test_three_cycle_inside_s3(self):
        s3 = group("(1 2)", "(1 2 3)")
        between = interval(s3, group("(1 2 3)"))
        self.assertEqual([X.order.value for X in between], [3, 6])

    def test_one_element_interval(self):
        d8 = group("(1 2 3 4)", "(1 3)")
        self.assertEqual([X.order.value for X in interval(d8, d8)], [8])

    def test_klein_group_inside_s4(self):
        s4 = catalog.build("S4")
        between = interval(s4, group("(1 2)(3 4)", "(1 3)(2 4)"))
        # V4, A4, the three D8 and S4
        self.assertEqual(sorted(X.order.value for X in between), [4, 8, 8, 8, 12, 24])

    def test_errors(self):
        with self.assertRaises(PreconditionError):
            interval(group("(1 2 3)"), group("(1 2)"))
        with self.assertRaises(CapExceededError):
            interval(catalog.build("S4"), group("(1 2)"), Caps(interval=4))


if __name__ == '__main__':
    unittest.main()
