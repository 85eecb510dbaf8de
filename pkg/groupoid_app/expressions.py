"""群胚表达式与元素表达式的解析

群胚表达式：

    group:cyclic:<n> | group:sym:<n> | pair:<k>
    union(<expr>,<expr>) | product(<expr>,<expr>) | file:<path>

解析只检查语法，构造时才检查参数（`pair:0` 可以解析，构造时报错）。

元素表达式（A(G) 中的元素）是若干项的和，项之间用顶层的 + / - 连接：

    [<系数>*]delta:G0         δ_{G⁰} 在 π 下的像 1_{G⁰}
    [<系数>*]delta:[x,y,...]  满 bisection U 的 π(δ_U) = 1_U
    [<系数>*]one:[x,y,...]    任意箭头集合的指示函数，one:[x] 即 1_x

系数是高斯有理数字面量（见 scalars），含 + / - 的系数要加括号，例如
`(2-3i/5)*one:[0<-1] + 3/2*delta:[0<-1,1<-0] - delta:G0`。
"""
import logging
from dataclasses import dataclass
from math import factorial
from typing import Optional, Union

from django.conf import settings

from .bisections import FullBisection
from .exceptions import EnumerationTooLargeError, ExpressionError, PreconditionError
from .groupoids import (
    FiniteGroupoid,
    cyclic_group,
    disjoint_union,
    load_json_file,
    read_json_file,
    make_pair_groupoid,
    product,
    symmetric_group,
)
from .scalars import ONE, parse_scalar
from .steinberg import GroupRingElement, SteinbergElement

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GroupExpr:
    kind: str
    n: int

    def to_text(self) -> str:
        return f"group:{self.kind}:{self.n}"

    def arrow_count(self) -> int:
        if self.n < 1:
            return 0
        return self.n if self.kind == "cyclic" else factorial(self.n)

    def build(self) -> FiniteGroupoid:
        return cyclic_group(self.n) if self.kind == "cyclic" else symmetric_group(self.n)


@dataclass(frozen=True)
class PairExpr:
    k: int

    def to_text(self) -> str:
        return f"pair:{self.k}"

    def arrow_count(self) -> int:
        return max(self.k, 0) ** 2

    def build(self) -> FiniteGroupoid:
        return make_pair_groupoid(self.k)


@dataclass(frozen=True)
class UnionExpr:
    left: "GroupoidExpr"
    right: "GroupoidExpr"

    def to_text(self) -> str:
        return f"union({self.left.to_text()},{self.right.to_text()})"

    def arrow_count(self) -> int:
        return self.left.arrow_count() + self.right.arrow_count()

    def build(self) -> FiniteGroupoid:
        return disjoint_union(self.left.build(), self.right.build())


@dataclass(frozen=True)
class ProductExpr:
    left: "GroupoidExpr"
    right: "GroupoidExpr"

    def to_text(self) -> str:
        return f"product({self.left.to_text()},{self.right.to_text()})"

    def arrow_count(self) -> int:
        return self.left.arrow_count() * self.right.arrow_count()

    def build(self) -> FiniteGroupoid:
        return product(self.left.build(), self.right.build())


@dataclass(frozen=True)
class FileExpr:
    path: str

    def to_text(self) -> str:
        return f"file:{self.path}"

    def arrow_count(self) -> int:
        data = read_json_file(self.path)
        if not isinstance(data, dict):
            return 0
        labels = {u for u in data.get("units", []) if isinstance(u, str)}
        labels.update(a.get("id") for a in data.get("arrows", []) if isinstance(a, dict))
        return len(labels)

    def build(self) -> FiniteGroupoid:
        return load_json_file(self.path)


GroupoidExpr = Union[GroupExpr, PairExpr, UnionExpr, ProductExpr, FileExpr]


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, message: str, pos: Optional[int] = None):
        raise ExpressionError(message, self.pos if pos is None else pos, self.text)

    def skip_spaces(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def expect(self, char: str):
        self.skip_spaces()
        if self.pos >= len(self.text) or self.text[self.pos] != char:
            if char == ")":
                self.error("括号不匹配：缺少 ')'")
            self.error(f"缺少 {char!r}")
        self.pos += 1

    def word(self) -> str:
        self.skip_spaces()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isalpha():
            self.pos += 1
        return self.text[start:self.pos]

    def integer(self) -> int:
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos] not in ",() \t":
            self.pos += 1
        digits = self.text[start:self.pos]
        if not digits.isdigit():
            self.error(f"非法整数: {digits!r}", start)
        return int(digits)

    def expr(self) -> GroupoidExpr:
        start = self.pos
        name = self.word()
        if name == "group":
            self.expect(":")
            kind_pos = self.pos
            kind = self.word()
            if kind not in ("cyclic", "sym"):
                self.error(f"未知的群构造子: {kind!r}", kind_pos)
            self.expect(":")
            return GroupExpr(kind, self.integer())
        if name == "pair":
            self.expect(":")
            return PairExpr(self.integer())
        if name in ("union", "product"):
            self.expect("(")
            left = self.expr()
            self.expect(",")
            right = self.expr()
            self.expect(")")
            return UnionExpr(left, right) if name == "union" else ProductExpr(left, right)
        if name == "file":
            self.expect(":")
            path_start = self.pos
            while self.pos < len(self.text) and self.text[self.pos] not in ",)":
                self.pos += 1
            path = self.text[path_start:self.pos].strip()
            if not path:
                self.error("file: 后缺少路径", path_start)
            return FileExpr(path)
        self.error(f"未知的构造子: {name!r}", start)


def parse_expr(text: str) -> GroupoidExpr:
    """解析群胚表达式，错误带字符位置"""
    parser = _Parser(text)
    expr = parser.expr()
    parser.skip_spaces()
    if parser.pos != len(text):
        if text[parser.pos] == ")":
            parser.error("括号不匹配：多余的 ')'")
        parser.error(f"多余的输入: {text[parser.pos:]!r}")
    return expr


def arrow_count(expr: GroupoidExpr) -> int:
    """不构造群胚而直接算 |G|"""
    return expr.arrow_count()


def build_groupoid(text: str, cap: Optional[int] = None) -> FiniteGroupoid:
    """解析并构造；构造出的群胚以规范文本命名

    |G| 超过 GROUPOID_ARROW_CAP 时在构造乘法表之前拒绝
    """
    expr = parse_expr(text)
    cap = settings.GROUPOID_ARROW_CAP if cap is None else cap
    size = expr.arrow_count()
    if size > cap:
        raise EnumerationTooLargeError("|G|", size, cap)
    return expr.build()


# ---- 元素表达式 ----

def _split_terms(text: str) -> list[tuple[int, int, str]]:
    """按顶层 +/- 切分，返回 (符号, 起始位置, 项文本)"""
    terms = []
    depth = 0
    sign, start = 1, 0
    for i, char in enumerate(text):
        if char in "([":
            depth += 1
        elif char in ")]":
            depth -= 1
            if depth < 0:
                raise ExpressionError("括号不匹配：多余的右括号", i, text)
        elif char in "+-" and depth == 0:
            body = text[start:i]
            if body.strip():
                terms.append((sign, start, body))
                sign = 1
            sign, start = sign * (1 if char == "+" else -1), i + 1
    if depth != 0:
        raise ExpressionError("括号不匹配：缺少右括号", len(text), text)
    body = text[start:]
    if not body.strip():
        raise ExpressionError("缺少项", len(text), text)
    terms.append((sign, start, body))
    return terms


def _labels(g: FiniteGroupoid, text: str, offset: int, full_text: str) -> list[int]:
    body = text.strip()
    if body == "G0":
        return list(g.units)
    if not (body.startswith("[") and body.endswith("]")):
        raise ExpressionError("箭头集合需写成 [x,y,...] 或 G0", offset, full_text)
    names = [name.strip() for name in body[1:-1].split(",") if name.strip()]
    if not names:
        raise ExpressionError("空的箭头集合", offset, full_text)
    arrows = []
    for name in names:
        if name not in g.labels:
            raise ExpressionError(f"未知的箭头: {name!r}", offset, full_text)
        arrows.append(g.index_of(name))
    return arrows


def _parse_terms(g: FiniteGroupoid, text: str, allow_one: bool) -> list[tuple[str, list[int], object]]:
    parsed = []
    for sign, start, body in _split_terms(text):
        token_at = max(body.rfind("delta:"), body.rfind("one:"))
        if token_at < 0:
            raise ExpressionError("项中缺少 delta: 或 one:", start, text)
        coefficient_text = body[:token_at].strip()
        coefficient = ONE
        if coefficient_text:
            if not coefficient_text.endswith("*"):
                raise ExpressionError("系数与记号之间需要 '*'", start + token_at, text)
            literal = coefficient_text[:-1].strip()
            if literal.startswith("(") and literal.endswith(")"):
                literal = literal[1:-1]
            coefficient = parse_scalar(literal, start)
        kind, _, rest = body[token_at:].partition(":")
        if kind == "one" and not allow_one:
            raise ExpressionError("群环元素只能由 delta: 组成", start + token_at, text)
        arrows = _labels(g, rest, start + token_at, text)
        if kind == "delta":
            try:
                FullBisection(g, tuple(arrows))
            except PreconditionError as exc:
                raise ExpressionError(f"delta 需要满 bisection: {exc}", start + token_at, text) from exc
        parsed.append((kind, arrows, coefficient if sign > 0 else -coefficient))
    return parsed


def parse_element(g: FiniteGroupoid, text: str) -> SteinbergElement:
    """解析 A(G) 中的元素"""
    f = SteinbergElement.zero(g)
    for _, arrows, coefficient in _parse_terms(g, text, allow_one=True):
        f = f + SteinbergElement.indicator(g, arrows).scale(coefficient)
    return f


def parse_group_ring_element(g: FiniteGroupoid, text: str) -> GroupRingElement:
    """解析只含 delta: 项的 ℂF(G) 元素"""
    terms = [(tuple(arrows), coefficient) for _, arrows, coefficient in _parse_terms(g, text, allow_one=False)]
    return GroupRingElement.from_terms(g, terms)
