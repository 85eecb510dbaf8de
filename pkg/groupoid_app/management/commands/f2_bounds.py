from pathlib import Path

from django.core.management.base import CommandError

from groupoid_app.utils import DISAGREEMENT_EXIT, GroupoidCommand, f2_payload

# 用法：python manage.py f2_bounds --n-max 100 [--radius 6] [--csv out.csv] [--check-chain] [--json]


class Command(GroupoidCommand):
    help = "F₂ 上 ψ_n 的 Haagerup 右端、闭式上界与截断范数下界"

    def add_arguments(self, parser):
        parser.add_argument("--n-max", type=int, required=True, help="n 的上限")
        parser.add_argument("--radius", type=int, default=None, help="截断球半径 R（不给则不计算截断范数）")
        parser.add_argument("--csv", type=str, default=None, help="同时写出 CSV")
        parser.add_argument("--check-chain", action="store_true", help="对 2 ≤ n ≤ n-max 检查整条不等式链")
        super().add_arguments(parser)

    def run(self, **options):
        if options["n_max"] < 1:
            raise CommandError("--n-max 必须 ≥ 1", returncode=2)
        payload, table = f2_payload(options["n_max"], options["radius"], options["check_chain"])
        if options["csv"]:
            path = Path(options["csv"])
            path.parent.mkdir(parents=True, exist_ok=True)
            table.to_csv(path, index=False)
        text = table.to_string(index=False, na_rep="-")
        if "chain" in payload:
            text += f"\n不等式链: 检查 {payload['chain']['checked']} 个 n，成立 {payload['chain']['holds']}"
        return payload, text

    def failure(self, payload):
        if "chain" in payload and not payload["chain"]["holds"]:
            return f"不等式链不成立: n = {payload['chain']['failing_n']}", DISAGREEMENT_EXIT
        return None
