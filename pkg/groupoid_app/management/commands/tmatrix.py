from groupoid_app.utils import GroupoidCommand, load_groupoid, tmatrix_payload

# 用法：python manage.py tmatrix "pair:2" "delta:[0<-1,1<-0]" [--json]
# 元素表达式语法见 groupoid_app/expressions.py


class Command(GroupoidCommand):
    help = "矩阵表示 T(f) 及其行和、列和"

    def add_arguments(self, parser):
        parser.add_argument("groupoid", type=str, help="群胚表达式")
        parser.add_argument("element", type=str, help="元素表达式，例如 \"3/2*delta:G0 - i*one:[0<-1]\"")
        super().add_arguments(parser)

    def run(self, **options):
        g = load_groupoid(options["groupoid"])
        payload = tmatrix_payload(g, options["element"])
        width = max(len(v) for row in payload["matrix"] for v in row)
        lines = [f"{payload['groupoid']}: T(f)，单位顺序 {', '.join(payload['units'])}"]
        for row, total in zip(payload["matrix"], payload["row_sums"]):
            lines.append("  [" + " ".join(v.rjust(width) for v in row) + f" ]  行和 {total}")
        lines.append("  列和 " + " ".join(payload["column_sums"]))
        return payload, "\n".join(lines)
