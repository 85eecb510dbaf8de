"""
功能：测试 F₂ 的约化字、规范枚举、ψ_n 的界链与截断正则表示范数
使用方式：python manage.py test tests.test_free_group
说明：截断范数在 R = 9 时需要数秒
"""
import math

from django.test import SimpleTestCase, override_settings
from sympy import Integer
from sympy.polys.domains import QQ

from groupoid_app.exceptions import ConvergenceError, EnumerationTooLargeError, ExpressionError, PreconditionError
from groupoid_app.free_group import (
    IDENTITY,
    F2Function,
    F2Word,
    ball,
    ball_size,
    bound_chain_check,
    bound_chain_table,
    canonical_enumeration,
    ceil_log3,
    copy_restriction,
    cumulative_sphere_bound,
    f2_table,
    haagerup_rhs,
    decay_bound,
    decay_bound_exact,
    phi_n_function,
    phi_n_preimage,
    psi,
    sphere,
    sphere_size,
    truncated_norm,
)


class WordTests(SimpleTestCase):
    def test_parse_and_reduce(self):
        self.assertEqual(F2Word.parse("aA"), IDENTITY)
        self.assertEqual(F2Word.parse("e"), IDENTITY)
        self.assertEqual(str(F2Word.parse("abBa")), "aa")
        self.assertEqual(F2Word.parse("aB") * F2Word.parse("bA"), IDENTITY)
        self.assertEqual(F2Word.parse("aB").inverse(), F2Word.parse("bA"))

    def test_invalid_letters(self):
        with self.assertRaises(ExpressionError) as ctx:
            F2Word.parse("ax")
        self.assertEqual(ctx.exception.position, 1)
        with self.assertRaises(ExpressionError):
            F2Word("aA")

    def test_length_is_subadditive(self):
        words = ball(2)
        for s in words:
            for t in words:
                product = F2Word(s) * F2Word(t)
                self.assertLessEqual(len(product), len(s) + len(t))

    def test_canonical_enumeration(self):
        self.assertEqual([str(w) for w in canonical_enumeration(5)], ["e", "a", "A", "b", "B"])
        self.assertEqual([str(w) for w in canonical_enumeration(8)][5:], ["aa", "ab", "aB"])
        self.assertEqual(len(canonical_enumeration(17)), 17)
        with self.assertRaises(PreconditionError):
            canonical_enumeration(0)

    def test_sphere_sizes(self):
        self.assertEqual([sphere_size(m) for m in range(5)], [1, 4, 12, 36, 108])
        for m in range(5):
            words = sphere(m)
            self.assertEqual(len(words), sphere_size(m))
            self.assertTrue(all(len(w) == m for w in words))
        self.assertEqual(len(ball(3)), ball_size(3))

    def test_cumulative_sphere_bound(self):
        self.assertEqual([ceil_log3(n) for n in (1, 2, 3, 4, 9, 10)], [0, 1, 1, 2, 2, 3])
        for n in (1, 5, 9, 10, 1000, 3 ** 10):
            self.assertTrue(cumulative_sphere_bound(n), n)


class BoundTests(SimpleTestCase):
    def test_haagerup_rhs(self):
        self.assertEqual(haagerup_rhs(psi(1)), 2.0)
        self.assertAlmostEqual(haagerup_rhs(psi(5)), 1.2)
        self.assertAlmostEqual(haagerup_rhs(F2Function.point(F2Word.parse("ab"))), 2 * math.sqrt(17))

    def test_decay_bound(self):
        self.assertEqual(decay_bound_exact(9), Integer(16))
        self.assertEqual(decay_bound(9), 16.0)
        self.assertEqual(decay_bound(1), 0.0)
        self.assertAlmostEqual(decay_bound(3 ** 10), 1200 / 243)

    def test_decay_bound_decays_along_powers_of_three(self):
        values = [decay_bound(3 ** k) for k in range(4, 17)]
        self.assertTrue(all(a > b for a, b in zip(values, values[1:])))
        self.assertLess(decay_bound(3 ** 16), 0.5)

    def test_chain_for_selected_n(self):
        for n in (2, 3, 5, 100, 3 ** 8):
            report = bound_chain_check(n)
            self.assertTrue(report.holds, report.to_dict())
            if n <= 100:
                self.assertAlmostEqual(report.values[0], haagerup_rhs(psi(n)))

    def test_chain_rejects_small_n(self):
        with self.assertRaises(PreconditionError):
            bound_chain_check(1)

    def test_chain_table(self):
        table = bound_chain_table(10 ** 6)
        self.assertEqual(len(table), 10 ** 6 - 1)
        self.assertTrue(table["holds"].all())
        row = table[table["n"] == 100].iloc[0]
        self.assertAlmostEqual(row["haagerup_rhs"], bound_chain_check(100).values[0])


class TruncatedNormTests(SimpleTestCase):
    def test_point_mass_has_norm_one(self):
        self.assertAlmostEqual(truncated_norm(F2Function.point(IDENTITY), 3), 1.0)
        self.assertAlmostEqual(truncated_norm(F2Function.point(F2Word.parse("a"), 2.0), 3), 2.0)

    def test_psi5_converges_from_below(self):
        norms = [truncated_norm(psi(5), radius) for radius in range(5, 10)]
        for smaller, larger in zip(norms, norms[1:]):
            self.assertLessEqual(smaller, larger + 1e-9)
        self.assertGreaterEqual(norms[-1], 0.85)
        self.assertLessEqual(norms[-1], 0.90)
        self.assertLess(norms[-1], (1 + 2 * math.sqrt(3)) / 5)

    def test_lower_bound_never_exceeds_haagerup(self):
        for n in (1, 5, 17, 53, 200):
            f = psi(n)
            self.assertLessEqual(truncated_norm(f, 9), haagerup_rhs(f) + 1e-9, n)

    def test_radius_must_cover_support(self):
        with self.assertRaises(PreconditionError):
            truncated_norm(psi(6), 1)

    @override_settings(F2_RADIUS_CAP=4)
    def test_radius_cap(self):
        with self.assertRaises(EnumerationTooLargeError):
            truncated_norm(psi(5), 5)

    @override_settings(F2_POWER_MAX_ITERATIONS=1)
    def test_non_convergence(self):
        with self.assertRaises(ConvergenceError):
            truncated_norm(psi(5), 4)


class PhiTests(SimpleTestCase):
    def test_phi_preimage(self):
        a = F2Word.parse("a")
        preimage = phi_n_preimage(2, a)
        self.assertEqual(len(preimage.terms), 2)
        self.assertEqual(preimage.pi_value((a, 1)), 1)
        self.assertEqual(preimage.pi_value((IDENTITY, 2)), QQ(1, 2))
        self.assertEqual(preimage.pi_value((a, 2)), QQ(1, 2))
        self.assertEqual(preimage.pi_value((IDENTITY, 1)), 0)
        self.assertEqual(
            preimage.to_list()[0],
            {"coefficient": "1/2", "bisection": ["(a,1)", "(e,2)"]},
        )

    def test_second_copy_is_psi(self):
        for n in (1, 4, 13):
            values = phi_n_function(n, F2Word.parse("b"))
            self.assertEqual(values[(F2Word.parse("b"), 1)], 1.0)
            self.assertAlmostEqual(haagerup_rhs(copy_restriction(values, 2)), haagerup_rhs(psi(n)))
            self.assertEqual(copy_restriction(values, 1).support(), [F2Word.parse("b")])


class TableTests(SimpleTestCase):
    def test_table_columns(self):
        table = f2_table(5)
        self.assertEqual(list(table.columns), ["n", "haagerup_rhs", "decay_bound", "truncated_norm"])
        self.assertEqual(table["n"].tolist(), [1, 2, 3, 4, 5])
        self.assertTrue(table["truncated_norm"].isna().all())
        self.assertAlmostEqual(table["haagerup_rhs"].iloc[4], 1.2)

    def test_table_with_radius(self):
        table = f2_table(6, radius=1)
        # ψ6 的支撑含长度 2 的字，半径 1 不够
        self.assertTrue(table["truncated_norm"].iloc[:5].notna().all())
        self.assertTrue(table["truncated_norm"].isna().iloc[5])
        self.assertLessEqual(table["truncated_norm"].iloc[4], table["haagerup_rhs"].iloc[4])
