from groupoid_app.corpus import CorpusPlan, parse_weights, run_verify
from groupoid_app.utils import DISAGREEMENT_EXIT, GroupoidCommand

# 用法：python manage.py verify --seed 1 --count 50 --size-cap 16 [--weights group=1,pair=1,product=1,union=2]
#       [--trials 1000] [--workers 4] [--json]


class Command(GroupoidCommand):
    help = "在随机语料上批量对照全部判据，任何不一致退出码为 3"

    def add_arguments(self, parser):
        parser.add_argument("--seed", type=int, default=1, help="随机种子")
        parser.add_argument("--count", type=int, default=50, help="语料规模")
        parser.add_argument("--size-cap", type=int, default=16, help="|G| 上限")
        parser.add_argument("--weights", type=str, default=None, help="构造子族权重，例如 group=1,pair=0")
        parser.add_argument("--trials", type=int, default=None, help="每个群胚的随机抽样次数")
        parser.add_argument("--workers", type=int, default=None, help="工作进程数")
        super().add_arguments(parser)

    def run(self, **options):
        plan = CorpusPlan(seed=options["seed"], count=options["count"], size_cap=options["size_cap"])
        if options["weights"]:
            plan = CorpusPlan(plan.seed, plan.count, plan.size_cap, parse_weights(options["weights"]))
        summary = run_verify(plan, trials=options["trials"], workers=options["workers"])
        lines = [
            f"seed={summary['seed']} count={summary['count']} size_cap={summary['size_cap']}: "
            f"实例 {summary['instances']}，跳过 {summary['skipped']}",
        ]
        for name, tally in summary["checks"].items():
            lines.append(f"  {name:<28} 通过 {tally['passed']:>4}  失败 {tally['failed']:>4}")
        cases = ", ".join(f"{case}: {n}" for case, n in summary["witness_cases"].items()) or "-"
        lines.append(f"  见证情形 {cases}")
        return summary, "\n".join(lines)

    def failure(self, payload):
        if not payload["ok"]:
            return f"{len(payload['failures'])} 项检查失败", DISAGREEMENT_EXIT
        return None
