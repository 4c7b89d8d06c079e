import unittest
from fractions import Fraction

from mpmath import iv, mp

from narayana_repdigits.diophantine.intervals import (
    PrecisionExhausted, ball, certainly_less, certainly_less_equal, certainly_negative,
    certainly_positive, endpoints, fraction_endpoints, interval_precision, midpoint,
    nearest_int_distance, radius, to_fraction, upper, lower,
)


class TestIntervalPrecision(unittest.TestCase):
    def test_restores_precision(self):
        saved = iv.prec
        with interval_precision(300):
            self.assertEqual(iv.prec, 300)
        self.assertEqual(iv.prec, saved)

    def test_restores_on_error(self):
        saved = iv.prec
        with self.assertRaises(KeyError):
            with interval_precision(300):
                raise KeyError
        self.assertEqual(iv.prec, saved)


class TestEndpoints(unittest.TestCase):
    def test_exact_endpoints(self):
        lo, hi = endpoints(iv.mpf([1, 2]))
        self.assertEqual(lo, 1)
        self.assertEqual(hi, 2)

    def test_ball_contains_center(self):
        with interval_precision(200):
            x = ball(mp.mpf(3), mp.mpf("1e-20"))
            lo, hi = endpoints(x)
            self.assertLess(lo, 3)
            self.assertGreater(hi, 3)
            self.assertLess(abs(midpoint(x) - 3), mp.mpf("1e-40"))
            self.assertAlmostEqual(float(radius(x)), 1e-20, delta=1e-28)

    def test_to_fraction(self):
        self.assertEqual(to_fraction(0.5), Fraction(1, 2))
        self.assertEqual(to_fraction(-3), Fraction(-3))
        self.assertEqual(to_fraction(mp.mpf(2) ** 70), Fraction(2 ** 70))
        with self.assertRaises(ValueError):
            to_fraction(mp.inf)

    def test_to_fraction_keeps_every_bit(self):
        with interval_precision(400):
            x = iv.sqrt(2)
        lo, hi = endpoints(x)
        lo_f, hi_f = to_fraction(lo), to_fraction(hi)
        self.assertLess(lo_f, hi_f)
        self.assertGreater(lo_f.denominator, 2 ** 300)
        self.assertLess(lo_f * lo_f, 2)
        self.assertGreater(hi_f * hi_f, 2)
        self.assertEqual(to_fraction(10 ** 60 + 1), Fraction(10 ** 60 + 1))

    def test_fraction_endpoints(self):
        lo, hi = fraction_endpoints(iv.mpf([0.25, 0.75]))
        self.assertEqual((lo, hi), (Fraction(1, 4), Fraction(3, 4)))

    def test_float_views(self):
        x = iv.mpf([0.25, 0.75])
        self.assertEqual(lower(x), 0.25)
        self.assertEqual(upper(x), 0.75)


class TestDecisions(unittest.TestCase):
    def test_signs(self):
        self.assertTrue(certainly_positive(iv.mpf([0.1, 2])))
        self.assertFalse(certainly_positive(iv.mpf([-0.1, 2])))
        self.assertTrue(certainly_negative(iv.mpf([-2, -0.1])))
        self.assertFalse(certainly_negative(iv.mpf([-2, 0])))

    def test_ordering(self):
        a, b = iv.mpf([1, 2]), iv.mpf([2, 3])
        self.assertFalse(certainly_less(a, b))
        self.assertTrue(certainly_less_equal(a, b))
        self.assertTrue(certainly_less(a, iv.mpf([2.5, 3])))
        self.assertFalse(certainly_less(iv.mpf([1, 3]), iv.mpf([2, 4])))


class TestNearestIntDistance(unittest.TestCase):
    def test_small(self):
        d = nearest_int_distance(iv.mpf(2.25))
        lo, hi = endpoints(d)
        self.assertEqual(lo, 0.25)
        self.assertEqual(hi, 0.25)

    def test_below_integer(self):
        d = nearest_int_distance(iv.mpf(-6.875))
        self.assertEqual(upper(d), 0.125)

    def test_large_argument(self):
        with interval_precision(256):
            x = iv.mpf(10 ** 30) + iv.mpf(0.25)
            self.assertAlmostEqual(upper(nearest_int_distance(x)), 0.25)

    def test_reduction_sized_argument(self):
        with interval_precision(1200):
            d = nearest_int_distance(iv.mpf(10) ** 56 * iv.sqrt(2))
        lo, hi = endpoints(d)
        self.assertLess(hi - lo, mp.mpf("1e-100"))
        self.assertAlmostEqual(float(hi), 0.3320, delta=1e-3)

    def test_undetermined(self):
        with self.assertRaises(PrecisionExhausted):
            nearest_int_distance(iv.mpf([0.4, 0.6]))
        self.assertTrue(issubclass(PrecisionExhausted, ArithmeticError))


if __name__ == "__main__":
    unittest.main()
