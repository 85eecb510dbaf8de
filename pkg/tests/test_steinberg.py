"""
功能：测试卷积、对合、π、r*/s*/δ₁ 与矩阵表示 T
使用方式：python manage.py test tests.test_steinberg
"""
from django.test import SimpleTestCase
from hypothesis import given, strategies as st
from sympy.polys.domains import QQ_I

from groupoid_app.bisections import FullBisection, enumerate_bisections, enumerate_full_bisections, unit_space
from groupoid_app.exceptions import PreconditionError
from groupoid_app.expressions import build_groupoid
from groupoid_app.groupoids import cyclic_group, disjoint_union, make_pair_groupoid
from groupoid_app.scalars import IMAG, ONE, ZERO
from groupoid_app.steinberg import (
    GroupRingElement,
    SteinbergElement,
    adjoint,
    column_sums,
    convolve,
    decompose_fij,
    delta1,
    format_matrix,
    involute,
    pi,
    r_star,
    row_sums,
    s_star,
    t_matrix,
)

from .strategies import groupoid_exprs, scalars


def _point(g, label, c=ONE):
    return SteinbergElement.point(g, g.index_of(label)).scale(c)


class ConvolutionTests(SimpleTestCase):
    def test_point_mass_squares_to_zero(self):
        g = make_pair_groupoid(2)
        gamma = _point(g, "0<-1")
        self.assertTrue(convolve(gamma, gamma).is_zero)
        self.assertEqual(gamma * _point(g, "1<-0"), _point(g, "0"))

    def test_unit_indicator_is_identity(self):
        g = build_groupoid("union(pair:2,group:cyclic:3)")
        one = SteinbergElement.indicator(g, g.units)
        f = SteinbergElement.from_mapping(g, {3: 2, 5: IMAG, 6: QQ_I(1, -1)})
        self.assertEqual(one * f, f)
        self.assertEqual(f * one, f)

    def test_indicators_multiply_like_bisections(self):
        g = make_pair_groupoid(3)
        found = enumerate_bisections(g)
        for a in found:
            for b in found:
                product = SteinbergElement.indicator(g, a.arrows) * SteinbergElement.indicator(g, b.arrows)
                self.assertEqual(product, SteinbergElement.indicator(g, a.multiply(b).arrows))

    def test_involution(self):
        g = make_pair_groupoid(2)
        f = _point(g, "0<-1", IMAG)
        self.assertEqual(involute(f), _point(g, "1<-0", -IMAG))
        self.assertEqual(involute(involute(f)), f)

    def test_linear_structure(self):
        g = cyclic_group(2)
        f = SteinbergElement.from_mapping(g, {0: 1, 1: 2})
        self.assertEqual(f - f, SteinbergElement.zero(g))
        self.assertEqual(3 * f, f + f + f)
        self.assertEqual(f.support(), (0, 1))
        self.assertEqual(f.to_dict(), {"e": "1", "g": "2"})
        self.assertEqual(str(_point(g, "g", IMAG)), "(i)*one:[g]")
        self.assertEqual(str(SteinbergElement.zero(g)), "0")

    def test_mixing_groupoids_is_rejected(self):
        with self.assertRaises(PreconditionError):
            SteinbergElement.zero(cyclic_group(2)) + SteinbergElement.zero(cyclic_group(3))

    @given(groupoid_exprs, st.data())
    def test_star_algebra_laws(self, expr, data):
        g = expr.build()
        vectors = st.lists(scalars, min_size=g.size, max_size=g.size).map(lambda v: SteinbergElement(g, tuple(v)))
        f, h, k = data.draw(vectors), data.draw(vectors), data.draw(vectors)
        self.assertEqual((f * h) * k, f * (h * k))
        self.assertEqual(f * (h + k), f * h + f * k)
        self.assertEqual(involute(f * h), involute(h) * involute(f))


class GroupRingTests(SimpleTestCase):
    def test_from_terms_merges_and_drops_zeros(self):
        g = make_pair_groupoid(2)
        identity, swap = enumerate_full_bisections(g)
        x = GroupRingElement.from_terms(g, [(swap, 1), (identity, 2), (swap, -1)])
        self.assertEqual(x.terms, ((identity.arrows, QQ_I(2, 0)),))
        self.assertTrue((x - x).is_zero)

    def test_multiplication_follows_full_group(self):
        g = make_pair_groupoid(2)
        swap = FullBisection(g, (2, 3))
        delta = GroupRingElement.delta(swap)
        self.assertEqual(delta * delta, GroupRingElement.identity(g))
        self.assertEqual(delta.star(), delta)

    def test_text(self):
        g = make_pair_groupoid(2)
        x = GroupRingElement.from_terms(g, [(unit_space(g), 2), ((2, 3), QQ_I(1, 1))])
        self.assertEqual(str(x), "(2)*delta:[0,1] + (1+i)*delta:[0<-1,1<-0]")
        self.assertEqual(
            x.to_list(),
            [
                {"bisection": ["0", "1"], "coefficient": "2"},
                {"bisection": ["0<-1", "1<-0"], "coefficient": "1+i"},
            ],
        )

    def test_pi_of_unit_space(self):
        g = build_groupoid("union(group:cyclic:2,group:cyclic:2)")
        self.assertEqual(pi(GroupRingElement.identity(g)), SteinbergElement.indicator(g, g.units))

    @given(groupoid_exprs, st.data())
    def test_pi_is_star_homomorphism(self, expr, data):
        g = expr.build()
        elements = enumerate_full_bisections(g)
        terms = st.lists(st.tuples(st.sampled_from(elements), scalars), min_size=1, max_size=4)
        x = GroupRingElement.from_terms(g, data.draw(terms))
        y = GroupRingElement.from_terms(g, data.draw(terms))
        self.assertEqual(pi(x * y), pi(x) * pi(y))
        self.assertEqual(pi(x.star()), involute(pi(x)))
        self.assertEqual(pi(x + y), pi(x) + pi(y))


class UnitSumTests(SimpleTestCase):
    def test_range_and_source_sums(self):
        g = make_pair_groupoid(3)
        f = _point(g, "0<-1")
        self.assertEqual(r_star(f), _point(g, "0"))
        self.assertEqual(s_star(f), _point(g, "1"))
        self.assertEqual(delta1(f), _point(g, "1") - _point(g, "0"))

    def test_images_of_pi_have_constant_unit_sums(self):
        g = make_pair_groupoid(2)
        x = GroupRingElement.from_terms(g, [(unit_space(g), 2), ((2, 3), QQ_I(1, 1))])
        expected = SteinbergElement.indicator(g, g.units).scale(QQ_I(3, 1))
        self.assertEqual(r_star(pi(x)), expected)
        self.assertEqual(s_star(pi(x)), expected)
        self.assertTrue(delta1(pi(x)).is_zero)

    def test_point_mass_has_nonzero_delta1(self):
        g = make_pair_groupoid(2)
        self.assertFalse(delta1(_point(g, "0<-1")).is_zero)


class MatrixTests(SimpleTestCase):
    def test_point_mass_matrix(self):
        g = make_pair_groupoid(2)
        matrix = t_matrix(_point(g, "0<-1"))
        self.assertEqual(format_matrix(matrix), [["0", "1"], ["0", "0"]])
        self.assertEqual(row_sums(matrix), [ONE, ZERO])
        self.assertEqual(column_sums(matrix), [ZERO, ONE])

    def test_swap_matrix(self):
        g = make_pair_groupoid(2)
        matrix = t_matrix(pi(GroupRingElement.delta(FullBisection(g, (2, 3)))))
        self.assertEqual(format_matrix(matrix), [["0", "1"], ["1", "0"]])

    def test_isotropy_collapses_onto_diagonal(self):
        g = disjoint_union(cyclic_group(2), cyclic_group(2))
        matrix = t_matrix(SteinbergElement.indicator(g, (2, 3)))
        self.assertEqual(format_matrix(matrix), [["1", "0"], ["0", "1"]])

    def test_adjoint(self):
        g = make_pair_groupoid(2)
        f = _point(g, "0<-1", IMAG)
        self.assertEqual(format_matrix(t_matrix(f)), [["0", "i"], ["0", "0"]])
        self.assertEqual(format_matrix(adjoint(t_matrix(f))), [["0", "0"], ["-i", "0"]])
        self.assertEqual(t_matrix(involute(f)), adjoint(t_matrix(f)))

    def test_fiber_decomposition_sums_back(self):
        g = build_groupoid("product(pair:2,group:cyclic:2)")
        f = SteinbergElement.from_mapping(g, {a: a + 1 for a in g.arrows})
        parts = decompose_fij(f)
        self.assertEqual(len(parts), 4)
        total = SteinbergElement.zero(g)
        for part in parts.values():
            total = total + part
        self.assertEqual(total, f)
        self.assertEqual(set(parts[(0, 1)].support()), set(g.fiber(0, 1)))

    @given(groupoid_exprs, st.data())
    def test_t_is_star_homomorphism(self, expr, data):
        g = expr.build()
        vectors = st.lists(scalars, min_size=g.size, max_size=g.size).map(lambda v: SteinbergElement(g, tuple(v)))
        f, h = data.draw(vectors), data.draw(vectors)
        self.assertEqual(t_matrix(f * h), t_matrix(f) * t_matrix(h))
        self.assertEqual(t_matrix(involute(f)), adjoint(t_matrix(f)))
        self.assertEqual(row_sums(t_matrix(f)), [r_star(f)[u] for u in g.units])
        self.assertEqual(column_sums(t_matrix(f)), [s_star(f)[u] for u in g.units])
