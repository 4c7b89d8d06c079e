import os
import unittest

from mpmath import iv

from narayana_repdigits.diophantine.intervals import PrecisionExhausted, interval_precision
from narayana_repdigits.diophantine.reduction import (
    M_DEFAULT, NoWitnessFound, PUBLISHED_TABLES, ReductionContext, ReductionProblem,
    certify_sweep, continued_fraction_convergents, digit_products, dujella_petho,
    reduction_context, sweep_step1, sweep_step2, sweep_step3, verify_witness,
)

SLOW = bool(os.environ.get("NARAYANA_SLOW_TESTS"))


class TestConvergents(unittest.TestCase):
    def test_rational(self):
        self.assertEqual(continued_fraction_convergents(iv.mpf(0.75), 100),
                         [(0, 1), (1, 1), (3, 4)])

    def test_terminating(self):
        self.assertEqual(continued_fraction_convergents(iv.mpf(3.25), 10), [(3, 1), (13, 4)])

    def test_golden_ratio(self):
        with interval_precision(512):
            convergents = continued_fraction_convergents((1 + iv.sqrt(5)) / 2, 100)
        fibonacci = [1, 1, 2, 3, 5, 8, 13, 21, 34, 55, 89, 144, 233]
        self.assertEqual(convergents, list(zip(fibonacci[1:], fibonacci[:-1])))

    def test_sqrt2(self):
        with interval_precision(200):
            convergents = continued_fraction_convergents(iv.sqrt(2), 1000)
        self.assertEqual(convergents[:6], [(1, 1), (3, 2), (7, 5), (17, 12), (41, 29), (99, 70)])
        self.assertEqual(convergents[-1], (3363, 2378))

    def test_extra(self):
        with interval_precision(200):
            convergents = continued_fraction_convergents(iv.sqrt(2), 1000, extra=2)
        self.assertEqual(convergents[-1], (19601, 13860))

    def test_precision_exhausted(self):
        with interval_precision(53):
            with self.assertRaises(PrecisionExhausted):
                continued_fraction_convergents(iv.sqrt(2), 10 ** 30)

    def test_not_positive(self):
        self.assertRaises(ValueError, continued_fraction_convergents, iv.mpf(-1), 10)


class TestDigitProducts(unittest.TestCase):
    def test_small_bases(self):
        self.assertEqual(digit_products(2), {1: ((1, 1, 1),)})
        self.assertEqual(list(digit_products(3)), [1, 2, 4, 8])

    def test_shared_products(self):
        products = digit_products(10)
        self.assertIn((1, 2, 6), products[12])
        self.assertIn((2, 2, 3), products[12])
        self.assertEqual(sum(len(t) for t in products.values()), 165)


class TestReductionProblem(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.context = ReductionContext(2, precision_bits=400, M=10 ** 6, extra=5)

    def test_context(self):
        self.assertGreater(self.context.candidates[0][2], 6 * 10 ** 6)
        self.assertEqual(len(self.context.candidates), 6)
        p, q = self.context.convergents[0]
        self.assertEqual((p, q), (1, 1))

    def test_no_witness_for_integer_mu(self):
        problem = ReductionProblem(self.context.tau, iv.mpf(0), iv.mpf(1), 2, 10 ** 6)
        with self.assertRaises(NoWitnessFound):
            dujella_petho(problem, self.context.convergents)

    def test_witness_is_verified(self):
        problem = self.context.problem(1, 1, label="g=2")
        witness = dujella_petho(problem, self.context.convergents)
        self.assertTrue(verify_witness(problem, witness))
        self.assertGreater(witness.q, 6 * 10 ** 6)
        self.assertGreater(witness.epsilon, 0)
        self.assertEqual(witness.bound, int(witness.w_bound))
        again = self.context.witness(1, 1, tightest=False)
        self.assertEqual(again.t, witness.t)

    def test_tightest_witness(self):
        problem = self.context.problem(1, 1, label="g=2")
        first = dujella_petho(problem, self.context.convergents)
        best = dujella_petho(problem, self.context.convergents, tightest=True)
        self.assertLessEqual(best.bound, first.bound)
        self.assertGreaterEqual(best.t, first.t)
        self.assertTrue(verify_witness(problem, best))

    def test_invalid_problem(self):
        with self.assertRaises(ValueError):
            ReductionProblem(self.context.tau, iv.mpf(0), iv.mpf(-1), 2, 10)
        with self.assertRaises(ValueError):
            ReductionProblem(self.context.tau, iv.mpf(0), iv.mpf(1), 1, 10)

    def test_invalid_context(self):
        self.assertRaises(ValueError, ReductionContext, 1)
        self.assertRaises(ValueError, ReductionContext, 2, 64)


class TestPublishedConvergent(unittest.TestCase):
    def test_published_tables(self):
        self.assertEqual(PUBLISHED_TABLES[3][3].q_index, 99)
        self.assertEqual(PUBLISHED_TABLES[3][2].q_index, 118)
        self.assertEqual(PUBLISHED_TABLES[1][3].q_index, 100)
        self.assertEqual([PUBLISHED_TABLES[3][g].bound for g in (7, 10)], [71, 59])

    def test_first_convergent_past_6M(self):
        context = reduction_context(2)
        t, p, q = context.candidates[0][:3]
        self.assertEqual(t, PUBLISHED_TABLES[1][2].q_index)
        self.assertEqual(context.convergents[t - 1], (p, q))
        self.assertGreater(q, 6 * M_DEFAULT)
        self.assertLessEqual(context.convergents[t - 2][1], 6 * M_DEFAULT)


class TestStep1(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.reports = {g: sweep_step1(g) for g in (2, 10)}

    def test_no_flagged_instances(self):
        for report in self.reports.values():
            self.assertTrue(report.ok)
            self.assertEqual(report.flagged, [])

    def test_close_to_published(self):
        self.assertTrue(190 <= self.reports[2].bound <= PUBLISHED_TABLES[1][2].bound + 2)
        self.assertTrue(55 <= self.reports[10].bound <= PUBLISHED_TABLES[1][10].bound + 2)

    def test_instances(self):
        self.assertEqual(len(self.reports[2].instances), 1)
        self.assertEqual(len(self.reports[10].instances), len(digit_products(10)))
        self.assertEqual(self.reports[2].length_bound, self.reports[2].bound)

    def test_summary_and_frame(self):
        summary = self.reports[10].summary()
        self.assertEqual(summary["step"], 1)
        self.assertEqual(summary["published"]["bound"], 59)
        frame = self.reports[10].to_frame()
        self.assertEqual(len(frame), len(digit_products(10)))
        self.assertFalse(frame["flagged"].any())

    def test_witness_recheck(self):
        report = self.reports[10]
        context = reduction_context(10)
        worst = report.worst
        problem = context.problem(1, worst.product)
        self.assertTrue(verify_witness(problem, worst.witness))

    def test_parallel_matches_serial(self):
        serial = sweep_step1(4, workers=1)
        parallel = sweep_step1(4, workers=2)
        self.assertEqual(parallel.instances, serial.instances)
        self.assertEqual(parallel.bound, serial.bound)

    def test_certified_at_double_precision(self):
        certification = certify_sweep(self.reports[2])
        self.assertTrue(certification.ok)
        self.assertTrue(certification.convergents_identical)
        self.assertEqual(certification.precision_bits, 2400)


@unittest.skipUnless(SLOW, "set NARAYANA_SLOW_TESTS to run the full sweeps")
class TestSlowSweeps(unittest.TestCase):
    def test_step2(self):
        report = sweep_step2(2, ell_max=194)
        self.assertTrue(report.ok)
        self.assertLessEqual(report.bound, PUBLISHED_TABLES[2][2].bound + 2)

    def test_step3(self):
        report = sweep_step3(2, ell_max=194, m_max=200, workers=0)
        self.assertTrue(report.ok)
        self.assertLessEqual(report.table_bound, PUBLISHED_TABLES[3][2].bound + 2)
        self.assertEqual(report.length_bound, report.bound + 1)
        self.assertLessEqual(report.bound_half_A, report.bound)
        self.assertLessEqual(report.bound_within_m_limit, report.bound)
        self.assertLessEqual(report.table_bound, report.bound)

    def test_step2_published_bases(self):
        for g in (5, 9):
            with self.subTest(g=g):
                report = sweep_step2(g, ell_max=194, workers=0)
                self.assertTrue(report.ok)
                self.assertLessEqual(report.bound, PUBLISHED_TABLES[2][g].bound + 2)

    def test_step3_published_bases(self):
        for g in (7, 10):
            with self.subTest(g=g):
                report = sweep_step3(g, ell_max=194, m_max=200, workers=0)
                self.assertTrue(report.ok)
                self.assertLessEqual(report.table_bound, PUBLISHED_TABLES[3][g].bound + 2)


if __name__ == "__main__":
    unittest.main()
