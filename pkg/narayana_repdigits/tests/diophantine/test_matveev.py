import unittest

import numpy as np
import numpy.testing as npt

from narayana_repdigits.diophantine.algebraic import HeightMode
from narayana_repdigits.diophantine.matveev import (
    DISPLAYED, LinearFormSpec, bound_chain, chain_coefficients, check_loglog_inequality,
    derive_ell_bound, derive_m_bound, derive_n_bound, derive_n_stage, k_bound_of_n, kappa,
    log_alpha, loglog_margin, matveev_constant, matveev_rhs, reduction_box, sanchez_luca_bound,
    small_case_k_bound, stage_constants,
)
from narayana_repdigits.diophantine.reduction import M_DEFAULT


class TestMatveev(unittest.TestCase):
    def test_constant(self):
        npt.assert_allclose(float(matveev_constant(3, 3)), 2.7045e12, rtol=1e-3)

    def test_rhs(self):
        spec = LinearFormSpec(3, 3, (1.0, 1.0, 1.0), np.e)
        npt.assert_allclose(float(matveev_rhs(spec)), -2 * float(matveev_constant(3, 3)),
                            rtol=1e-12)

    def test_spec_validation(self):
        self.assertRaises(ValueError, LinearFormSpec, 3, 3, (1.0, 1.0), 10)
        self.assertRaises(ValueError, LinearFormSpec, 3, 3, (0.1, 1.0, 1.0), 10)
        self.assertRaises(ValueError, LinearFormSpec, 0, 3, (), 10)
        self.assertRaises(ValueError, LinearFormSpec, 1, 3, (1.0,), 0.5)

    def test_log_alpha(self):
        npt.assert_allclose(float(log_alpha()), 0.3822450858, rtol=1e-9)


class TestKappa(unittest.TestCase):
    def test_published(self):
        self.assertEqual(kappa(2), 6)
        self.assertEqual(kappa(10, HeightMode.PUBLISHED), 6)

    def test_strict(self):
        npt.assert_allclose(float(kappa(2, HeightMode.STRICT)), 1.6514, atol=1e-3)
        npt.assert_allclose(float(kappa(10, HeightMode.STRICT)), 3.3598, atol=1e-3)


class TestChain(unittest.TestCase):
    def test_stage_constants(self):
        c1, c2, c3 = (float(c) for c in stage_constants(2))
        npt.assert_allclose(c1, 5.58e13, rtol=5e-3)
        npt.assert_allclose(c2, 3.10e12, rtol=5e-3)
        npt.assert_allclose(c3, 9.30e12, rtol=5e-3)

    def test_coefficients(self):
        coeff = chain_coefficients(2)
        npt.assert_allclose(float(coeff.ell), 4.47e14, rtol=5e-3)
        npt.assert_allclose(float(coeff.m), 3.33e28, rtol=5e-3)
        npt.assert_allclose(float(coeff.n), 2.48e42, rtol=5e-3)
        self.assertLessEqual(float(coeff.m), DISPLAYED["m_coefficient"])

    def test_ell_and_m_bounds(self):
        ell = derive_ell_bound(2, 2)
        npt.assert_allclose(float(ell), 1.318e14, rtol=5e-3)
        self.assertLessEqual(float(ell), 1.4986e14)
        self.assertLessEqual(float(derive_m_bound(2, 2, 1.4986e14)), 4.214e27)
        self.assertRaises(ValueError, derive_ell_bound, 2, 1)

    def test_n_bound(self):
        n2, k2 = derive_n_bound(2)
        npt.assert_allclose(float(n2), 1.91e48, rtol=1e-2)
        self.assertLess(float(n2), 2.18e48)
        n10, k10 = derive_n_bound(10)
        npt.assert_allclose(float(n10), 3.19e51, rtol=1e-2)
        self.assertLess(float(k10), 1.985e54)
        npt.assert_allclose(float(k2), float(k_bound_of_n(2, n2)))

    def test_third_stage_inside_n_bound(self):
        for g in (2, 10):
            n_bound, _ = derive_n_bound(g)
            ell = derive_ell_bound(g, n_bound)
            m = derive_m_bound(g, n_bound, ell)
            n_stage = derive_n_stage(g, n_bound, ell, m)
            self.assertGreater(float(n_stage), float(m))
            self.assertLess(float(n_stage), float(n_bound))
            report = bound_chain(g)
            self.assertTrue(report.intermediate["n_stage_within_n_bound"])
            npt.assert_allclose(report.intermediate["n_stage"], float(n_stage))

    def test_bound_chain_within_tolerance(self):
        for g in (2, 10):
            report = bound_chain(g)
            self.assertTrue(report.ok, [c for c in report.checks if not c.within_tolerance])
            d = report.as_dict()
            self.assertEqual(d["g"], g)
            self.assertEqual(d["mode"], "published")
            self.assertEqual(len(d["checks"]), 9)

    def test_strict_is_smaller(self):
        published = bound_chain(10)
        strict = bound_chain(10, HeightMode.STRICT)
        self.assertLess(strict.n_bound, published.n_bound)


class TestAuxiliary(unittest.TestCase):
    def test_sanchez_luca(self):
        npt.assert_allclose(float(sanchez_luca_bound(1, 100)), 200 * np.log(100))
        self.assertRaises(ValueError, sanchez_luca_bound, 3, 1e3)
        self.assertRaises(ValueError, sanchez_luca_bound, 0, 1e3)

    def test_k_bounds(self):
        npt.assert_allclose(float(k_bound_of_n(2, 10)), 80 * np.log(2))
        npt.assert_allclose(float(small_case_k_bound(10)), 2 + 3 * np.log(10) / 0.3822450858,
                            rtol=1e-9)
        self.assertRaises(ValueError, k_bound_of_n, 1, 10)

    def test_loglog(self):
        holds, worst = check_loglog_inequality()
        self.assertTrue(holds)
        self.assertEqual(worst, 2)
        npt.assert_allclose(float(loglog_margin(2)), 0.174, atol=5e-3)
        self.assertFalse(check_loglog_inequality([2.0], 97.8)[0])

    def test_reduction_box(self):
        n_max, k_max = reduction_box()
        self.assertIsInstance(k_max, int)
        self.assertLessEqual(k_max, M_DEFAULT)
        self.assertGreater(k_max, 19 * 10 ** 53)
        self.assertGreater(n_max, 10 ** 53)
        self.assertRaises(ValueError, reduction_box, [])


if __name__ == "__main__":
    unittest.main()
