from groupoid_app.utils import DISAGREEMENT_EXIT, GroupoidCommand, load_groupoid, witness_payload

# 用法：python manage.py witness "union(group:cyclic:2,group:cyclic:2)" [--gamma1 X --gamma2 Y] [--json]


class Command(GroupoidCommand):
    help = "π 非单射时构造核中的非零元素"

    def add_arguments(self, parser):
        parser.add_argument("groupoid", type=str, help="群胚表达式")
        parser.add_argument("--gamma1", type=str, default=None, help="指定 γ1（箭头名）")
        parser.add_argument("--gamma2", type=str, default=None, help="指定 γ2（箭头名）")
        super().add_arguments(parser)

    def run(self, **options):
        g = load_groupoid(options["groupoid"])
        payload = witness_payload(g, options["gamma1"], options["gamma2"])
        case = payload["case"] + (f"（由 {payload['reduced_from']} 归约）" if payload["reduced_from"] else "")
        lines = [
            f"{payload['groupoid']}: 情形 {case}，γ1 = {payload['gamma1']}，γ2 = {payload['gamma2']}",
        ]
        for name, labels in sorted(payload["bisections"].items()):
            lines.append(f"  {name} = {{{', '.join(labels)}}}")
        lines.append(f"  a = {payload['expression']}")
        lines.append(f"  π(a) = 0: {payload['pi_is_zero']}")
        return payload, "\n".join(lines)

    def failure(self, payload):
        if not payload["pi_is_zero"]:
            return "见证元素的 π 像不为零", DISAGREEMENT_EXIT
        return None
