from groupoid_app.utils import GroupoidCommand, load_groupoid, validation_payload

# 用法：python manage.py validate "pair:3" [--json]
#       python manage.py validate "file:path/to/groupoid.json"


class Command(GroupoidCommand):
    help = "校验群胚公理，输出轨道与迷向群阶"

    def add_arguments(self, parser):
        parser.add_argument("groupoid", type=str, help="群胚表达式")
        super().add_arguments(parser)

    def run(self, **options):
        g = load_groupoid(options["groupoid"], require_valid=False)
        payload = validation_payload(g)
        report = payload["validation"]
        lines = [f"{payload['groupoid']}: |G| = {g.size}, |G0| = {g.unit_count}"]
        if report["ok"]:
            lines.append("公理校验通过")
            for orbit, order in zip(payload["orbits"], payload["isotropy_orders"]):
                lines.append(f"  轨道 {{{', '.join(orbit)}}}  迷向群阶 {order}")
        else:
            lines.append(f"公理校验失败 [{report['axiom']}]: {report['message']}")
        return payload, "\n".join(lines)

    def failure(self, payload):
        if not payload["validation"]["ok"]:
            return payload["validation"]["message"], 1
        return None
