"""
功能：测试管理命令的输出、golden 文件与退出码
使用方式：python manage.py test tests.test_commands
说明：golden 文件在 tests/golden/ 下，内容与 --json 输出逐字节一致
"""
import contextlib
import io
import json
import tempfile
from pathlib import Path
from unittest import mock

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase

from groupoid_app.groupoids import make_pair_groupoid, to_json
from groupoid_app.management.commands.analyze import Command as AnalyzeCommand
from groupoid_app.utils import DISAGREEMENT_EXIT

GOLDEN_DIR = Path(__file__).resolve().parent / "golden"


def run(*args) -> str:
    out = io.StringIO()
    call_command(*args, stdout=out)
    return out.getvalue()


def golden(name: str) -> str:
    return (GOLDEN_DIR / name).read_text(encoding="utf-8")


class GoldenTests(SimpleTestCase):
    def test_analyze(self):
        self.assertEqual(run("analyze", "pair:2", "--json"), golden("analyze_pair2.json"))

    def test_validate(self):
        self.assertEqual(run("validate", "pair:2", "--json"), golden("validate_pair2.json"))

    def test_full_group(self):
        self.assertEqual(run("full_group", "pair:2", "--cayley", "--json"), golden("full_group_pair2.json"))

    def test_tmatrix(self):
        output = run("tmatrix", "pair:2", "delta:[0<-1,1<-0]", "--json")
        self.assertEqual(output, golden("tmatrix_pair2_swap.json"))

    def test_witness(self):
        output = run("witness", "union(group:cyclic:2,group:cyclic:2)", "--json")
        self.assertEqual(json.loads(output), json.loads(golden("witness_two_cyclic.json")))

    def test_output_is_byte_identical_across_runs(self):
        for args in (("analyze", "pair:3", "--witness", "--json"), ("full_group", "pair:3", "--json")):
            self.assertEqual(run(*args), run(*args))


class TextOutputTests(SimpleTestCase):
    def test_analyze_text(self):
        output = run("analyze", "pair:3", "--witness")
        self.assertIn("|F(G)| = 6", output)
        self.assertIn("见证（情形 i）", output)

    def test_full_group_text(self):
        output = run("full_group", "union(group:cyclic:2,group:cyclic:2)", "--cayley")
        self.assertIn("|F(G)| = 4", output)
        self.assertIn("Cayley", output)

    def test_witness_with_given_arrows(self):
        payload = json.loads(run("witness", "pair:3", "--gamma1", "0<-1", "--gamma2", "1<-2", "--json"))
        self.assertEqual(payload["case"], "i")
        self.assertEqual(payload["selected"], ["0<-1", "1<-2"])
        self.assertTrue(payload["pi_is_zero"])

    def test_f2_bounds(self):
        payload = json.loads(run("f2_bounds", "--n-max", "100", "--json"))
        self.assertEqual(len(payload["rows"]), 100)
        self.assertEqual(payload["rows"][0], {"n": 1, "haagerup_rhs": 2.0, "decay_bound": 0.0, "truncated_norm": None})
        self.assertNotIn("chain", payload)

    def test_f2_bounds_csv_and_chain(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "out" / "f2.csv"
            payload = json.loads(
                run("f2_bounds", "--n-max", "20", "--radius", "1", "--csv", str(path), "--check-chain", "--json")
            )
            lines = path.read_text(encoding="utf-8").splitlines()
        self.assertEqual(lines[0], "n,haagerup_rhs,decay_bound,truncated_norm")
        self.assertEqual(len(lines), 21)
        self.assertEqual(payload["chain"], {"checked": 19, "holds": True, "failing_n": []})
        self.assertIsNotNone(payload["rows"][4]["truncated_norm"])
        self.assertIsNone(payload["rows"][5]["truncated_norm"])

    def test_verify(self):
        summary = json.loads(run("verify", "--seed", "1", "--count", "8", "--size-cap", "12", "--trials", "2", "--json"))
        self.assertTrue(summary["ok"])
        self.assertEqual(summary["instances"], 8)


class ExitCodeTests(SimpleTestCase):
    def assertExitCode(self, code, *args):
        with self.assertRaises(CommandError) as ctx:
            run(*args)
        self.assertEqual(ctx.exception.returncode, code)
        return ctx.exception

    def test_domain_errors_exit_one(self):
        self.assertExitCode(1, "analyze", "pair:0")
        self.assertExitCode(1, "analyze", "triangle:3")
        self.assertExitCode(1, "tmatrix", "pair:2", "delta:[0<-1]")
        self.assertExitCode(1, "witness", "pair:2")

    def test_enumeration_cap_exits_one(self):
        error = self.assertExitCode(1, "analyze", "pair:8")
        self.assertIn("enumeration too large", str(error))

    def test_invalid_groupoid_file(self):
        g = make_pair_groupoid(2)
        data = to_json(g)
        data["compose"] = [row if row[:2] != ["0<-1", "1<-0"] else ["0<-1", "1<-0", "1"] for row in data["compose"]]
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "broken.json"
            path.write_text(json.dumps(data), encoding="utf-8")
            error = self.assertExitCode(1, "validate", f"file:{path}")
            self.assertIn("range identity violated at 0<-1", str(error))
            self.assertExitCode(1, "analyze", f"file:{path}")

    def test_disagreement_exits_three(self):
        payload = json.loads(golden("analyze_pair2.json"))
        payload.update(agrees=False, disagreements=["injective"])
        with mock.patch("groupoid_app.management.commands.analyze.analysis_payload", return_value=payload):
            self.assertExitCode(DISAGREEMENT_EXIT, "analyze", "pair:2")

    def test_usage_error_exits_two(self):
        with contextlib.redirect_stderr(io.StringIO()):
            with self.assertRaises(SystemExit) as ctx:
                AnalyzeCommand().run_from_argv(["manage.py", "analyze"])
        self.assertEqual(ctx.exception.code, 2)
