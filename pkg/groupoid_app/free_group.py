"""自由群 F₂：约化字、球面计数、ψ_n / φ_n、Haagerup 不等式的界链与截断正则表示范数

本模块是唯一使用浮点数（binary64）的地方，所有比较都带显式容差。
字母顺序 a < a⁻¹ < b < b⁻¹，文本里 a⁻¹、b⁻¹ 写作 A、B，单位元写作 e。
"""
import logging
import math
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Mapping, Optional

import numpy as np
import pandas as pd
from django.conf import settings
from scipy import sparse
from sympy import Integer, sqrt
from sympy.combinatorics.free_groups import free_group
from sympy.polys.domains import QQ, QQ_I

from .exceptions import ConvergenceError, EnumerationTooLargeError, ExpressionError, PreconditionError
from .scalars import format_scalar

logger = logging.getLogger(__name__)

F2, _A, _B = free_group("a, b")
LETTERS = "aAbB"
_GENERATORS = {"a": _A, "A": _A ** -1, "b": _B, "B": _B ** -1}
_INVERSE_LETTER = {"a": "A", "A": "a", "b": "B", "B": "b"}
_RANK = {letter: i for i, letter in enumerate(LETTERS)}


def _to_letters(element) -> str:
    parts = []
    for symbol, exponent in element.array_form:
        letter = str(symbol)
        parts.append((letter if exponent > 0 else letter.upper()) * abs(exponent))
    return "".join(parts)


@dataclass(frozen=True)
class F2Word:
    """F₂ 中的约化字"""

    letters: str = ""

    def __post_init__(self):
        if any(x not in _RANK for x in self.letters):
            raise ExpressionError(f"非法字母: {self.letters!r}", 0, self.letters)
        if any(_INVERSE_LETTER[x] == y for x, y in zip(self.letters, self.letters[1:])):
            raise ExpressionError(f"不是约化字: {self.letters!r}", 0, self.letters)

    @classmethod
    def parse(cls, text: str) -> "F2Word":
        """"aB" = a·b⁻¹；"e" 或空串为单位元；未约化的输入会被约化"""
        source = text.strip()
        if source in ("", "e"):
            return cls()
        bad = next((i for i, x in enumerate(source) if x not in _RANK), None)
        if bad is not None:
            raise ExpressionError(f"非法字母 {source[bad]!r}", bad, text)
        element = F2.identity
        for letter in source:
            element = element * _GENERATORS[letter]
        return cls(_to_letters(element))

    @cached_property
    def element(self):
        element = F2.identity
        for letter in self.letters:
            element = element * _GENERATORS[letter]
        return element

    def __mul__(self, other: "F2Word") -> "F2Word":
        return F2Word(_to_letters(self.element * other.element))

    def inverse(self) -> "F2Word":
        return F2Word(_to_letters(self.element ** -1))

    def __len__(self):
        return len(self.letters)

    @property
    def sort_key(self) -> tuple:
        return len(self.letters), tuple(_RANK[x] for x in self.letters)

    def __str__(self):
        return self.letters or "e"


IDENTITY = F2Word()


# ---- 球面与规范枚举 ----

def sphere_size(m: int) -> int:
    """|E_m| = 4·3^{m-1}（m ≥ 1），|E_0| = 1"""
    if m < 0:
        raise PreconditionError(f"m 必须 ≥ 0: {m}")
    return 1 if m == 0 else 4 * 3 ** (m - 1)


def ball_size(radius: int) -> int:
    return 2 * 3 ** radius - 1


@lru_cache(maxsize=32)
def _sphere_letters(m: int) -> tuple[str, ...]:
    if m == 0:
        return ("",)
    return tuple(
        w + x for w in _sphere_letters(m - 1) for x in LETTERS if not w or _INVERSE_LETTER[w[-1]] != x
    )


def sphere(m: int) -> list[F2Word]:
    return [F2Word(w) for w in _sphere_letters(m)]


@lru_cache(maxsize=16)
def ball(radius: int) -> tuple[str, ...]:
    """Ball(R) 的字（以字母串表示），按规范顺序"""
    return tuple(w for m in range(radius + 1) for w in _sphere_letters(m))


def word_length_for(n: int) -> int:
    """规范顺序下第 n 个字的长度"""
    m = 0
    while ball_size(m) < n:
        m += 1
    return m


def canonical_enumeration(n: int) -> list[F2Word]:
    """前 n 个字：长度不减，同长按 a < a⁻¹ < b < b⁻¹ 的字典序"""
    if n < 1:
        raise PreconditionError(f"n 必须 ≥ 1: {n}")
    return [F2Word(w) for w in ball(word_length_for(n))[:n]]


def ceil_log3(n: int) -> int:
    """⌈log₃ n⌉，整数运算"""
    k, power = 0, 1
    while power < n:
        k, power = k + 1, power * 3
    return k


def cumulative_sphere_bound(n: int) -> bool:
    """Σ_{m=0}^{⌈log₃n⌉} |E_m| ≥ n"""
    if n < 1:
        raise PreconditionError(f"n 必须 ≥ 1: {n}")
    return sum(sphere_size(m) for m in range(ceil_log3(n) + 1)) >= n


# ---- F₂ 上的有限支撑函数 ----

@dataclass(frozen=True)
class F2Function:
    """有限支撑实函数，coefficients 为 (字, 值)，按规范顺序"""

    coefficients: tuple[tuple[F2Word, float], ...]

    @classmethod
    def from_mapping(cls, mapping: Mapping[F2Word, float]) -> "F2Function":
        items = sorted(((w, float(v)) for w, v in mapping.items() if v != 0), key=lambda item: item[0].sort_key)
        return cls(tuple(items))

    @classmethod
    def point(cls, word: F2Word, value: float = 1.0) -> "F2Function":
        return cls.from_mapping({word: value})

    def support(self) -> list[F2Word]:
        return [w for w, _ in self.coefficients]

    @property
    def max_length(self) -> int:
        return max((len(w) for w, _ in self.coefficients), default=0)

    def __getitem__(self, word: F2Word) -> float:
        return dict(self.coefficients).get(word, 0.0)


def psi(n: int) -> F2Function:
    """ψ_n = (1/n) Σ_{i≤n} 1_{g_i}"""
    return F2Function(tuple((w, 1.0 / n) for w in canonical_enumeration(n)))


def haagerup_rhs(f: F2Function) -> float:
    """2 (Σ_s |f(s)|² (1 + |s|⁴))^{1/2}"""
    total = math.fsum(abs(v) ** 2 * (1 + len(w) ** 4) for w, v in f.coefficients)
    return 2.0 * math.sqrt(total)


def decay_bound_exact(n: int):
    """12⌈log₃n⌉²/√n 的 sympy 精确值"""
    if n < 1:
        raise PreconditionError(f"n 必须 ≥ 1: {n}")
    k = ceil_log3(n)
    return Integer(12) * k ** 2 / sqrt(Integer(n))


def decay_bound(n: int) -> float:
    return float(decay_bound_exact(n))


# ---- 界链 ----

CHAIN_LINKS = ("haagerup_rhs", "sphere_sum", "weighted_sum", "log_bound", "closed_form", "decay_bound")


def _sphere_counts(n: int, k: int) -> list[int]:
    """前 n 个字中长度为 m 的个数，m = 0..k"""
    return [min(sphere_size(m), max(0, n - (ball_size(m - 1) if m else 0))) for m in range(k + 1)]


def bound_chain_values(n: int) -> list[float]:
    k = ceil_log3(n)
    counts = _sphere_counts(n, k)
    weights = [1 + m ** 4 for m in range(k + 1)]
    return [
        2 * math.sqrt(math.fsum(c * w for c, w in zip(counts, weights)) / n ** 2),
        2 * math.sqrt(math.fsum(sphere_size(m) * weights[m] for m in range(k + 1)) / n ** 2),
        2 * math.sqrt((1 + math.fsum(8 * 3 ** (m - 1) * m ** 4 for m in range(1, k + 1))) / n ** 2),
        2 * math.sqrt(8 * k ** 4 / n ** 2 * math.fsum(3.0 ** (m - 1) for m in range(k + 1))),
        4 * k ** 2 / n * math.sqrt(3 ** (k + 1) - 1 / 3),
        decay_bound(n),
    ]


@dataclass(frozen=True)
class ChainReport:
    n: int
    k: int
    values: tuple[float, ...]
    failing_link: Optional[str] = None

    @property
    def holds(self) -> bool:
        return self.failing_link is None

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "ceil_log3_n": self.k,
            "links": dict(zip(CHAIN_LINKS, self.values)),
            "holds": self.holds,
            "failing_link": self.failing_link,
        }


def bound_chain_check(n: int, tolerance: Optional[float] = None) -> ChainReport:
    """逐环检查 ψ_n 的不等式链，每环允许相对误差 tolerance"""
    if n < 2:
        raise PreconditionError(f"界链只对 n ≥ 2 成立: {n}")
    tolerance = settings.F2_CHAIN_TOLERANCE if tolerance is None else tolerance
    values = bound_chain_values(n)
    failing = None
    for name, left, right in zip(CHAIN_LINKS[1:], values, values[1:]):
        if left > right * (1 + tolerance):
            failing = name
            logger.warning(f"n={n}: 界链在 {name} 处不成立 ({left} > {right})")
            break
    return ChainReport(n, ceil_log3(n), tuple(values), failing)


def bound_chain_table(n_max: int, tolerance: Optional[float] = None) -> pd.DataFrame:
    """对 2 ≤ n ≤ n_max 向量化检查界链，只用球面计数"""
    if n_max < 2:
        raise PreconditionError(f"n_max 必须 ≥ 2: {n_max}")
    tolerance = settings.F2_CHAIN_TOLERANCE if tolerance is None else tolerance
    n = np.arange(2, n_max + 1, dtype=np.int64)
    k_max = ceil_log3(n_max)
    powers = 3 ** np.arange(k_max + 1, dtype=np.int64)
    k = np.searchsorted(powers, n, side="left")

    m = np.arange(k_max + 1)
    sizes = np.where(m == 0, 1, 4 * 3.0 ** (m - 1))
    weights = 1.0 + m.astype(float) ** 4
    ball_before = np.concatenate(([0], 2 * 3 ** m[:-1] - 1)).astype(np.int64)

    exact_sum = np.zeros(n.shape, dtype=float)
    for j in range(k_max + 1):
        counts = np.clip(n - ball_before[j], 0, int(sizes[j]))
        exact_sum += counts * weights[j]

    sphere_prefix = np.cumsum(sizes * weights)
    weighted_prefix = 1 + np.cumsum(np.where(m == 0, 0.0, 8 * 3.0 ** (m - 1) * m.astype(float) ** 4))
    geometric_prefix = np.cumsum(3.0 ** (m - 1))
    nf = n.astype(float)
    kf = k.astype(float)

    table = pd.DataFrame({
        "n": n,
        "k": k,
        "haagerup_rhs": 2 * np.sqrt(exact_sum / nf ** 2),
        "sphere_sum": 2 * np.sqrt(sphere_prefix[k] / nf ** 2),
        "weighted_sum": 2 * np.sqrt(weighted_prefix[k] / nf ** 2),
        "log_bound": 2 * np.sqrt(8 * kf ** 4 / nf ** 2 * geometric_prefix[k]),
        "closed_form": 4 * kf ** 2 / nf * np.sqrt(3.0 ** (kf + 1) - 1 / 3),
        "decay_bound": 12 * kf ** 2 / np.sqrt(nf),
    })
    holds = np.ones(n.shape, dtype=bool)
    for left, right in zip(CHAIN_LINKS, CHAIN_LINKS[1:]):
        holds &= table[left].to_numpy() <= table[right].to_numpy() * (1 + tolerance)
    table["holds"] = holds
    return table


# ---- 截断正则表示 ----

@lru_cache(maxsize=8)
def _left_multiplication_maps(radius: int) -> dict[str, np.ndarray]:
    """每个字母 x 在 Ball(R) 上的左乘下标映射，越界记为哨兵 len(ball)"""
    words = ball(radius)
    index = {w: i for i, w in enumerate(words)}
    sentinel = len(words)
    maps = {}
    for x in LETTERS:
        inverse = _INVERSE_LETTER[x]
        target = np.empty(sentinel + 1, dtype=np.int64)
        for i, w in enumerate(words):
            product = w[1:] if w and w[0] == inverse else x + w
            target[i] = index.get(product, sentinel)
        target[sentinel] = sentinel
        maps[x] = target
    return maps


def truncated_operator(f: F2Function, radius: int) -> sparse.csr_matrix:
    """f 在 Ball(R) 上的截断左卷积算子：e_w ↦ Σ_s f(s) e_{sw}（sw 落在球外则丢弃）"""
    cap = settings.F2_RADIUS_CAP
    if radius > cap:
        raise EnumerationTooLargeError("Ball(R) radius", radius, cap)
    if f.max_length > radius:
        raise PreconditionError(f"半径 {radius} 小于支撑的最大长度 {f.max_length}")
    maps = _left_multiplication_maps(radius)
    size = ball_size(radius)
    columns = np.arange(size, dtype=np.int64)
    rows, cols, data = [], [], []
    for word, value in f.coefficients:
        target = np.append(columns, size)
        # s·w = s₁(s₂(…(s_k w)))，逐个字母从右往左作用
        for letter in reversed(word.letters):
            target = maps[letter][target]
        target = target[:size]
        keep = target < size
        rows.append(target[keep])
        cols.append(columns[keep])
        data.append(np.full(int(keep.sum()), value))
    matrix = sparse.coo_matrix(
        (np.concatenate(data), (np.concatenate(rows), np.concatenate(cols))), shape=(size, size)
    )
    return matrix.tocsr()


def truncated_norm(
    f: F2Function,
    radius: int,
    tolerance: Optional[float] = None,
    max_iterations: Optional[int] = None,
) -> float:
    """截断算子的最大奇异值（对 AᵀA 做幂迭代），是 ‖f‖_r 的下界

    Args:
        f: 有限支撑函数
        radius: 球半径 R，需 ≥ 支撑最大长度
        tolerance: 特征值估计的相对收敛阈值
        max_iterations: 迭代上限，超过则抛 ConvergenceError
    Returns:
        float: ‖A x‖，x 为收敛后的单位向量
    """
    tolerance = settings.F2_POWER_TOLERANCE if tolerance is None else tolerance
    max_iterations = settings.F2_POWER_MAX_ITERATIONS if max_iterations is None else max_iterations
    operator = truncated_operator(f, radius)
    gram = (operator.T @ operator).tocsr()
    rng = np.random.default_rng(0)
    x = rng.uniform(0.5, 1.5, operator.shape[1])
    x /= np.linalg.norm(x)
    previous = 0.0
    for iteration in range(max_iterations):
        y = gram @ x
        value = np.linalg.norm(y)
        if value == 0.0:
            return 0.0
        x = y / value
        if abs(value - previous) <= tolerance * value:
            logger.debug(f"幂迭代在第 {iteration + 1} 步收敛，R={radius}")
            return float(np.linalg.norm(operator @ x))
        previous = value
    raise ConvergenceError(f"幂迭代 {max_iterations} 步内未收敛 (R={radius})")


# ---- F₂ ⊔ F₂ 上的 φ_n ----

TaggedWord = tuple[F2Word, int]


@dataclass(frozen=True)
class PhiPreimage:
    """(1/n) Σ_i δ_{U_i}，U_i = {(t,1), (g_i,2)}，只保存支撑描述"""

    n: int
    t: F2Word
    terms: tuple[tuple[object, tuple[TaggedWord, TaggedWord]], ...]

    def pi_value(self, tagged: TaggedWord):
        """π 像在某个带标记字上的值（精确有理数）"""
        return sum((c for c, support in self.terms if tagged in support), QQ.zero)

    def to_list(self) -> list[dict]:
        return [
            {
                "coefficient": format_scalar_qq(c),
                "bisection": [f"({w},{k})" for w, k in support],
            }
            for c, support in self.terms
        ]


def format_scalar_qq(value) -> str:
    return format_scalar(QQ_I.convert_from(value, QQ))


def phi_n_preimage(n: int, t: F2Word) -> PhiPreimage:
    if n < 1:
        raise PreconditionError(f"n 必须 ≥ 1: {n}")
    coefficient = QQ(1, n)
    terms = tuple((coefficient, ((t, 1), (g, 2))) for g in canonical_enumeration(n))
    return PhiPreimage(n, t, terms)


def phi_n_function(n: int, t: F2Word) -> dict[TaggedWord, float]:
    """φ_n = 1_{(t,1)} + (1/n) Σ 1_{(g_i,2)}"""
    values: dict[TaggedWord, float] = {(t, 1): 1.0}
    for g in canonical_enumeration(n):
        values[(g, 2)] = values.get((g, 2), 0.0) + 1.0 / n
    return values


def copy_restriction(values: Mapping[TaggedWord, float], copy: int) -> F2Function:
    """取 F₂ ⊔ F₂ 上函数在第 copy 个副本上的部分"""
    return F2Function.from_mapping({w: v for (w, k), v in values.items() if k == copy})


# ---- 汇总表 ----

def f2_table(n_max: int, radius: Optional[int] = None, n_values: Optional[Iterable[int]] = None) -> pd.DataFrame:
    """列依次为 n、haagerup_rhs、decay_bound、truncated_norm（球未覆盖支撑时为空）"""
    if n_max < 1:
        raise PreconditionError(f"n_max 必须 ≥ 1: {n_max}")
    rows = []
    for n in n_values or range(1, n_max + 1):
        f = psi(n)
        norm = None
        if radius is not None and f.max_length <= radius:
            norm = truncated_norm(f, radius)
        rows.append({
            "n": n,
            "haagerup_rhs": haagerup_rhs(f),
            "decay_bound": decay_bound(n),
            "truncated_norm": norm,
        })
    logger.info(f"f2 表生成完成: n ≤ {n_max}, R = {radius}")
    return pd.DataFrame(rows, columns=["n", "haagerup_rhs", "decay_bound", "truncated_norm"])
