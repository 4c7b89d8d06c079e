import os
import tempfile
import unittest
import warnings

import pandas as pd
from mpmath import mp

from narayana_repdigits.diophantine.algebraic import compute_constants
from narayana_repdigits.diophantine.recurrence import (
    GrowthBoundWarning, binet_residual, k_bound_from_growth, narayana_upto, verify_growth,
)

FIRST = (0, 1, 1, 1, 2, 3, 4, 6, 9, 13, 19, 28, 41, 60, 88, 129, 189)


class TestNarayanaTable(unittest.TestCase):
    def test_values(self):
        table = narayana_upto(16)
        self.assertEqual(table.values, FIRST)
        self.assertEqual(table.k_max, 16)
        self.assertEqual(len(table), 17)
        self.assertEqual(table[16], 189)

    def test_twenty(self):
        self.assertEqual(narayana_upto(20)[20], 872)

    def test_prefix_consistent(self):
        self.assertEqual(narayana_upto(300).values[:51], narayana_upto(50).values)

    def test_digit_growth(self):
        table = narayana_upto(1000)
        log_alpha = mp.log(compute_constants(128).alpha)
        for k in range(50, 1001):
            self.assertLess(abs(mp.log(table[k]) - k * log_alpha), 2)

    def test_short(self):
        self.assertEqual(narayana_upto(0).values, (0,))
        self.assertEqual(narayana_upto(1).values, (0, 1))
        self.assertRaises(ValueError, narayana_upto, -1)

    def test_exact_large(self):
        table = narayana_upto(2000)
        for k in (500, 1000, 2000):
            self.assertEqual(table[k], table[k - 1] + table[k - 3])
        self.assertIsInstance(table[2000], int)

    def test_frame(self):
        table = narayana_upto(10)
        frame = table.to_frame()
        self.assertEqual(list(frame.columns), ["k", "N_k"])
        self.assertEqual(frame["N_k"].iloc[-1], 19)
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "narayana.csv")
            table.write_csv(path)
            self.assertEqual(list(pd.read_csv(path)["N_k"]), list(table.values))


class TestGrowth(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            cls.report = verify_growth(1000)
        cls.caught = [w.category for w in caught]
        cls.messages = [str(w.message) for w in caught if w.category is GrowthBoundWarning]

    def test_lower_bound_fails(self):
        self.assertFalse(self.report)
        self.assertEqual(self.report.lower_failures[0], 3)
        self.assertEqual(len(self.report.lower_failures), 998)
        self.assertIn(GrowthBoundWarning, self.caught)

    def test_warning_is_short(self):
        message, = self.messages
        self.assertIn("lower for 998 n (3, 4, 5, 6, 7, ...)", message)
        self.assertIn("upper for no n", message)
        self.assertLess(len(message), 200)

    def test_upper_bound_holds(self):
        self.assertEqual(self.report.upper_failures, ())

    def test_shift(self):
        self.assertEqual(self.report.shift, 3)
        self.assertEqual(self.report.k_max, 1000)

    def test_invalid(self):
        self.assertRaises(ValueError, verify_growth, 0)


class TestBinetResidual(unittest.TestCase):
    def test_bound(self):
        c = compute_constants(256)
        for k in (1, 10, 100):
            residual = binet_residual(k, c)
            self.assertGreaterEqual(residual, 0)
            self.assertLess(residual, c.alpha ** (-mp.mpf(k) / 2))

    def test_bound_up_to_1000(self):
        c = compute_constants(512)
        for k in range(1, 1001):
            self.assertLess(binet_residual(k, c), c.alpha ** (-mp.mpf(k) / 2), k)

    def test_invalid(self):
        self.assertRaises(ValueError, binet_residual, 0, compute_constants(256))


class TestKBound(unittest.TestCase):
    def test_k_bound(self):
        self.assertAlmostEqual(float(k_bound_from_growth(205, 2)), 1118.2, delta=0.2)
        self.assertAlmostEqual(float(k_bound_from_growth(1, 10, shift=0)),
                               3 * 2.302585 / 0.382245, places=3)

    def test_bound_covers_known_solutions(self):
        # the largest solution k = 16 has repdigits of length at most 6
        self.assertGreater(k_bound_from_growth(6, 2), 16)


if __name__ == "__main__":
    unittest.main()
