from groupoid_app.utils import DISAGREEMENT_EXIT, GroupoidCommand, analysis_payload, load_groupoid

# 用法：python manage.py analyze "pair:2" [--witness] [--json]
# 判据与线性代数对照不一致时退出码为 3


class Command(GroupoidCommand):
    help = "π 的单射性、满射性、稠密性：判据与精确线性代数对照"

    def add_arguments(self, parser):
        parser.add_argument("groupoid", type=str, help="群胚表达式")
        parser.add_argument("--witness", action="store_true", help="非单射时附上核中的见证元素")
        super().add_arguments(parser)

    def run(self, **options):
        g = load_groupoid(options["groupoid"])
        report = analysis_payload(g, with_witness=options["witness"])
        injective, surjective = report["injective"], report["surjective"]
        condition = f"（条件 ({injective['condition']})）" if injective["condition"] else ""
        lines = [
            f"{report['groupoid']}: |G| = {report['arrow_count']}, |G0| = {report['unit_count']}, "
            f"|F(G)| = {report['full_group_order']}",
            f"  单射: 对照 {injective['oracle']} / 判据 {injective['theorem']}{condition}",
            f"  满射: 对照 {surjective['oracle']} / 判据 {surjective['theorem']}",
            f"  核维数 {report['kernel_dimension']}，像维数 {report['image_dimension']}，稠密 {report['dense']}",
            f"  同构 {report['isomorphism']}，一致 {report['agrees']}",
        ]
        if report["witness"]:
            lines.append(f"  见证（情形 {report['witness']['case']}）: {report['witness']['expression']}")
        return report, "\n".join(lines)

    def failure(self, payload):
        if not payload["agrees"]:
            return f"判据与对照不一致: {', '.join(payload['disagreements'])}", DISAGREEMENT_EXIT
        return None
