from django.conf import settings

from groupoid_app.utils import GroupoidCommand, full_group_payload, load_groupoid

# 用法：python manage.py full_group "pair:3" [--cayley] [--json]


class Command(GroupoidCommand):
    help = "拓扑满群 F(G)：阶、轨道分解，可选 Cayley 表"

    def add_arguments(self, parser):
        parser.add_argument("groupoid", type=str, help="群胚表达式")
        parser.add_argument(
            "--cayley",
            action="store_true",
            help=f"输出 Cayley 表（|F(G)| ≤ {settings.CAYLEY_TABLE_LIMIT}）",
        )
        super().add_arguments(parser)

    def run(self, **options):
        g = load_groupoid(options["groupoid"])
        payload = full_group_payload(g, with_table=options["cayley"])
        lines = [f"{payload['groupoid']}: |F(G)| = {payload['order']}"]
        for orbit in payload["orbits"]:
            lines.append(
                f"  轨道 {{{', '.join(orbit['orbit'])}}}: {orbit['size']}! × {orbit['isotropy_order']}^{orbit['size']}"
                f" = {orbit['factor']}"
            )
        for i, labels in enumerate(payload.get("elements", [])):
            lines.append(f"  [{i}] {{{', '.join(labels)}}}")
        if "cayley_table" in payload:
            lines.append("Cayley 表（下标为上面的编号）：")
            for row in payload["cayley_table"]:
                lines.append("  " + " ".join(f"{v:>3}" for v in row))
        return payload, "\n".join(lines)
