"""高斯有理数标量

- 系数域取 sympy 的 `QQ_I`（a + bi，a、b 为任意精度有理数），所有恒等式都可以精确比较。
- 字面量语法：`3/2`、`-1`、`i`、`2-3i/5`、`(1+i)/2`；`i` 可以直接跟在数字或右括号后面。
"""
import random
import re
from tokenize import TokenError

from sympy import I
from sympy.parsing.sympy_parser import parse_expr
from sympy.polys.domains import QQ, QQ_I
from sympy.polys.domains.gaussiandomains import GaussianRational
from sympy.polys.polyerrors import CoercionFailed

from .exceptions import ExpressionError

Scalar = GaussianRational

ZERO = QQ_I.zero
ONE = QQ_I.one
IMAG = QQ_I(0, 1)

_LITERAL_CHARS = re.compile(r"[0-9+\-*/() i]+")
_IMPLICIT_IMAG = re.compile(r"([0-9)])\s*i")


def as_scalar(value) -> Scalar:
    """把 int / sympy 有理数 / QQ 元素转换为 QQ_I 元素"""
    if isinstance(value, GaussianRational):
        return value
    try:
        return QQ_I.convert(value)
    except CoercionFailed as exc:
        raise ExpressionError(f"无法转换为高斯有理数: {value!r}", 0, str(value)) from exc


def parse_scalar(text: str, offset: int = 0) -> Scalar:
    """解析高斯有理数字面量

    Args:
        text: 字面量文本
        offset: 在外层表达式中的起始位置（用于报错）
    Returns:
        Scalar: QQ_I 元素
    """
    source = text.strip()
    if not source or not _LITERAL_CHARS.fullmatch(source):
        raise ExpressionError(f"非法的标量字面量: {text!r}", offset, text)
    expr_text = _IMPLICIT_IMAG.sub(r"\1*I", source).replace("i", "I")
    try:
        expr = parse_expr(expr_text, local_dict={"I": I})
    except (SyntaxError, TypeError, TokenError) as exc:
        raise ExpressionError(f"非法的标量字面量: {text!r}", offset, text) from exc
    try:
        return QQ_I.from_sympy(expr)
    except (CoercionFailed, TypeError) as exc:
        raise ExpressionError(f"不是高斯有理数: {text!r}", offset, text) from exc


def format_scalar(value: Scalar) -> str:
    """格式化为可被 `parse_scalar` 读回的文本，例如 `1/2-3/5i`"""
    real = QQ.to_sympy(value.x)
    imag = QQ.to_sympy(value.y)
    if imag == 0:
        return str(real)
    magnitude = abs(imag)
    imag_text = ("" if magnitude == 1 else str(magnitude)) + "i"
    if real == 0:
        return ("-" if imag < 0 else "") + imag_text
    return f"{real}{'-' if imag < 0 else '+'}{imag_text}"


def conjugate(value: Scalar) -> Scalar:
    return QQ_I(value.x, -value.y)


def random_scalar(rng: random.Random, bound: int = 3) -> Scalar:
    """随机小高斯有理数（分母取 1 或 2），用于性质检验"""
    real = QQ(rng.randint(-bound, bound), rng.randint(1, 2))
    imag = QQ(rng.randint(-bound, bound), rng.randint(1, 2))
    return QQ_I(real, imag)
