"""
功能：测试只读计算接口的返回结构 {"code","message","result"}
使用方式：python manage.py test tests.test_views
"""
from unittest import mock

from django.test import SimpleTestCase


class GroupoidViewTests(SimpleTestCase):
    def get(self, url, **params):
        response = self.client.get(url, params)
        return response.status_code, response.json()

    def test_analyze(self):
        status, body = self.get("/groupoid/analyze", groupoid="pair:2")
        self.assertEqual(status, 200)
        self.assertEqual(body["code"], "2000")
        self.assertTrue(body["result"]["injective"]["oracle"])
        self.assertFalse(body["result"]["surjective"]["oracle"])

    def test_analyze_with_witness(self):
        _, body = self.get("/groupoid/analyze", groupoid="pair:3", witness="1")
        self.assertEqual(body["result"]["witness"]["case"], "i")

    def test_validate_reports_orbits(self):
        _, body = self.get("/groupoid/validate", groupoid="union(group:cyclic:2,group:cyclic:2)")
        self.assertEqual(body["result"]["orbits"], [["e@1"], ["e@2"]])
        self.assertEqual(body["result"]["isotropy_orders"], [2, 2])

    def test_full_group(self):
        _, body = self.get("/groupoid/full_group", groupoid="pair:2", cayley="true")
        self.assertEqual(body["result"]["order"], 2)
        self.assertEqual(body["result"]["cayley_table"], [[0, 1], [1, 0]])

    def test_witness(self):
        _, body = self.get("/groupoid/witness", groupoid="union(pair:2,pair:2)")
        self.assertEqual(body["result"]["case"], "ii")
        self.assertTrue(body["result"]["pi_is_zero"])

    def test_tmatrix(self):
        _, body = self.get("/groupoid/tmatrix", groupoid="pair:2", element="i*one:[0<-1]")
        self.assertEqual(body["result"]["matrix"], [["0", "i"], ["0", "0"]])

    def test_f2_bounds(self):
        _, body = self.get("/f2/bounds", n_max="5", check_chain="1")
        self.assertEqual(len(body["result"]["rows"]), 5)
        self.assertTrue(body["result"]["chain"]["holds"])

    def test_domain_errors(self):
        for url, params in (
            ("/groupoid/analyze", {}),
            ("/groupoid/analyze", {"groupoid": "triangle:3"}),
            ("/groupoid/analyze", {"groupoid": "file:/etc/passwd"}),
            ("/groupoid/witness", {"groupoid": "pair:2"}),
            ("/groupoid/tmatrix", {"groupoid": "pair:2"}),
            ("/f2/bounds", {"n_max": "x"}),
        ):
            status, body = self.get(url, **params)
            self.assertEqual(status, 400, (url, params))
            self.assertEqual(body["code"], "3002", (url, params))
            self.assertIsNone(body["result"])

    def test_oversized_groupoid_is_rejected_before_construction(self):
        with mock.patch("groupoid_app.expressions.cyclic_group") as build:
            status, body = self.get("/groupoid/validate", groupoid="group:cyclic:5000")
        build.assert_not_called()
        self.assertEqual(status, 400)
        self.assertEqual(body["code"], "3002")
        self.assertIn("enumeration too large", body["message"])

    def test_cayley_limit_is_checked_before_enumeration(self):
        with mock.patch("groupoid_app.utils.enumerate_full_bisections") as enumerate_all:
            status, body = self.get("/groupoid/full_group", groupoid="pair:8", cayley="1")
        enumerate_all.assert_not_called()
        self.assertEqual(status, 400)
        self.assertIn("Cayley table", body["message"])

    def test_full_group_order_without_listing(self):
        _, body = self.get("/groupoid/full_group", groupoid="pair:8")
        self.assertEqual(body["result"]["order"], 40320)
        self.assertNotIn("elements", body["result"])

    def test_unexpected_error(self):
        with mock.patch("groupoid_app.views.analysis_payload", side_effect=RuntimeError("boom")):
            status, body = self.get("/groupoid/analyze", groupoid="pair:2")
        self.assertEqual(status, 400)
        self.assertEqual(body["code"], "3001")
        self.assertIn("boom", body["message"])

    def test_only_get(self):
        response = self.client.post("/groupoid/analyze", {"groupoid": "pair:2"})
        self.assertEqual(response.status_code, 405)
