"""
功能：测试 π 非单射时核元素的构造（条件 (1) 与情形 (i)–(v)）
使用方式：python manage.py test tests.test_witnesses
"""
from django.test import SimpleTestCase
from hypothesis import assume, given

from groupoid_app.analysis import injective_by_theorem
from groupoid_app.exceptions import PreconditionError
from groupoid_app.expressions import build_groupoid
from groupoid_app.steinberg import GroupRingElement, pi
from groupoid_app.witnesses import case_key, classify, noninjectivity_witness, select_pair

from .strategies import groupoid_exprs


class AnchorTests(SimpleTestCase):
    def test_anchor_cases(self):
        cases = {
            "union(group:cyclic:2,group:cyclic:2)": ("condition_1", None),
            "pair:3": ("i", None),
            "union(pair:2,pair:2)": ("ii", None),
            "union(group:cyclic:2,pair:2)": ("iii", None),
            "product(pair:2,group:cyclic:2)": ("iv", None),
            "product(group:cyclic:2,pair:2)": ("iv", "v"),
        }
        for text, (case, reduced_from) in cases.items():
            witness = noninjectivity_witness(build_groupoid(text))
            self.assertEqual((witness.case, witness.reduced_from), (case, reduced_from), text)
            self.assertTrue(witness.is_valid, text)
            self.assertEqual(case_key(witness), reduced_from or case)

    def test_condition_one_element(self):
        g = build_groupoid("union(group:cyclic:2,group:cyclic:2)")
        witness = noninjectivity_witness(g)
        self.assertEqual(witness.to_dict()["bisections"], {
            "U1": ["e@2", "g@1"],
            "U2": ["e@1", "g@2"],
            "U3": ["g@1", "g@2"],
        })
        expected = GroupRingElement.from_terms(g, [((1, 2), 1), ((0, 3), 1), ((2, 3), -1), ((0, 1), -1)])
        self.assertEqual(witness.element, expected)
        self.assertEqual(
            str(witness.element),
            "(-1)*delta:[e@1,e@2] + (1)*delta:[e@1,g@2] + (1)*delta:[e@2,g@1] + (-1)*delta:[g@1,g@2]",
        )

    def test_pair3_automatic_selection(self):
        g = build_groupoid("pair:3")
        self.assertEqual(select_pair(g), (g.index_of("0<-1"), g.index_of("0<-2")))
        witness = noninjectivity_witness(g)
        self.assertEqual((g.label(witness.gamma1), g.label(witness.gamma2)), ("1<-0", "0<-2"))
        self.assertEqual(len(witness.element.terms), 6)

    def test_pair3_with_given_arrows(self):
        g = build_groupoid("pair:3")
        witness = noninjectivity_witness(g, g.index_of("0<-1"), g.index_of("1<-2"))
        self.assertEqual(witness.case, "i")
        self.assertEqual(witness.selected, (g.index_of("0<-1"), g.index_of("1<-2")))
        self.assertEqual(len(witness.element.terms), 6)
        self.assertTrue(pi(witness.element).is_zero)

    def test_case_three_element_has_four_terms(self):
        witness = noninjectivity_witness(build_groupoid("union(group:cyclic:2,pair:2)"))
        self.assertEqual(len(witness.element.terms), 4)
        self.assertTrue(witness.to_dict()["pi_is_zero"])

    def test_reduction_of_case_five(self):
        g = build_groupoid("product(group:cyclic:2,pair:2)")
        gamma1, gamma2 = select_pair(g)
        case, loop, _, reduced_from = classify(g, gamma1, gamma2)
        self.assertEqual((case, reduced_from), ("iv", "v"))
        self.assertEqual(g.range_of[loop], g.source_of[loop])

    def test_logs_case(self):
        with self.assertLogs("groupoid_app.witnesses", level="INFO") as logs:
            noninjectivity_witness(build_groupoid("union(group:cyclic:2,pair:2)"))
        self.assertIn("见证情形 iii", logs.output[0])


class PreconditionTests(SimpleTestCase):
    def test_injective_groupoid_has_no_witness(self):
        with self.assertRaises(PreconditionError):
            noninjectivity_witness(build_groupoid("pair:2"))
        with self.assertRaises(PreconditionError):
            noninjectivity_witness(build_groupoid("group:sym:3"))

    def test_inverse_pair_is_rejected(self):
        g = build_groupoid("pair:3")
        with self.assertRaises(PreconditionError):
            noninjectivity_witness(g, g.index_of("0<-1"), g.index_of("1<-0"))

    def test_both_arrows_required(self):
        g = build_groupoid("pair:3")
        with self.assertRaises(PreconditionError):
            noninjectivity_witness(g, g.index_of("0<-1"))


class PropertyTests(SimpleTestCase):
    @given(groupoid_exprs)
    def test_witness_is_nonzero_kernel_element(self, expr):
        g = expr.build()
        assume(not injective_by_theorem(g).value)
        witness = noninjectivity_witness(g)
        self.assertFalse(witness.element.is_zero)
        self.assertTrue(pi(witness.element).is_zero)
