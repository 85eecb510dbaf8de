"""群环 ℂF(G)、Steinberg 代数 A(G) 与表示 π、r*、s*、δ₁、T

- A(G) 的元素是按箭头下标的稠密向量（离散情形 A(G) = C_c(G)）；
- ℂF(G) 的元素是满 bisection 到标量的稀疏映射，不存零系数；
- 标量一律为 QQ_I 高斯有理数，所有恒等式精确成立；
- T(f) 是 |G⁰|×|G⁰| 的 DomainMatrix，T(f)_{ij} = Σ_{γ∈G^{a_i}_{a_j}} f(γ)。
"""
import logging
import random
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Union

from sympy.polys.domains import QQ_I
from sympy.polys.matrices import DomainMatrix

from .bisections import Bisection, FullBisection, enumerate_full_bisections, unit_space
from .exceptions import PreconditionError
from .groupoids import FiniteGroupoid
from .scalars import ONE, ZERO, Scalar, as_scalar, conjugate, format_scalar, random_scalar

logger = logging.getLogger(__name__)


def _check_same(g1: FiniteGroupoid, g2: FiniteGroupoid):
    if g1 is not g2 and g1 != g2:
        raise PreconditionError("元素属于不同的群胚")


@dataclass(frozen=True)
class SteinbergElement:
    """f ∈ A(G)，values[γ] = f(γ)"""

    groupoid: FiniteGroupoid = field(compare=False, repr=False)
    values: tuple[Scalar, ...]

    def __post_init__(self):
        if len(self.values) != self.groupoid.size:
            raise PreconditionError(f"向量长度应为 |G| = {self.groupoid.size}")

    # ---- 构造 ----

    @classmethod
    def zero(cls, g: FiniteGroupoid) -> "SteinbergElement":
        return cls(g, (ZERO,) * g.size)

    @classmethod
    def from_mapping(cls, g: FiniteGroupoid, mapping: Mapping[int, object]) -> "SteinbergElement":
        values = [ZERO] * g.size
        for arrow, value in mapping.items():
            values[arrow] += as_scalar(value)
        return cls(g, tuple(values))

    @classmethod
    def indicator(cls, g: FiniteGroupoid, arrows: Iterable[int]) -> "SteinbergElement":
        """1_U"""
        return cls.from_mapping(g, {a: ONE for a in set(arrows)})

    @classmethod
    def point(cls, g: FiniteGroupoid, arrow: int) -> "SteinbergElement":
        """1_γ"""
        return cls.indicator(g, (arrow,))

    # ---- 线性结构 ----

    def __getitem__(self, arrow: int) -> Scalar:
        return self.values[arrow]

    def __add__(self, other: "SteinbergElement") -> "SteinbergElement":
        _check_same(self.groupoid, other.groupoid)
        return SteinbergElement(self.groupoid, tuple(a + b for a, b in zip(self.values, other.values)))

    def __neg__(self) -> "SteinbergElement":
        return SteinbergElement(self.groupoid, tuple(-a for a in self.values))

    def __sub__(self, other: "SteinbergElement") -> "SteinbergElement":
        return self + (-other)

    def scale(self, c) -> "SteinbergElement":
        c = as_scalar(c)
        return SteinbergElement(self.groupoid, tuple(c * a for a in self.values))

    __rmul__ = scale

    def __mul__(self, other: "SteinbergElement") -> "SteinbergElement":
        return convolve(self, other)

    @property
    def is_zero(self) -> bool:
        return all(v == ZERO for v in self.values)

    def support(self) -> tuple[int, ...]:
        return tuple(a for a, v in enumerate(self.values) if v != ZERO)

    def to_dict(self) -> dict[str, str]:
        return {self.groupoid.label(a): format_scalar(self.values[a]) for a in self.support()}

    def __str__(self):
        terms = [f"({format_scalar(self.values[a])})*one:[{self.groupoid.label(a)}]" for a in self.support()]
        return " + ".join(terms) or "0"


def convolve(f: SteinbergElement, h: SteinbergElement) -> SteinbergElement:
    """(f∗h)(γ) = Σ_{αβ=γ} f(α)h(β)"""
    _check_same(f.groupoid, h.groupoid)
    g = f.groupoid
    values = [ZERO] * g.size
    for alpha, beta, gamma in g.composable_pairs:
        if f.values[alpha] != ZERO and h.values[beta] != ZERO:
            values[gamma] += f.values[alpha] * h.values[beta]
    return SteinbergElement(g, tuple(values))


def involute(f: SteinbergElement) -> SteinbergElement:
    """f*(γ) = conj(f(γ⁻¹))"""
    g = f.groupoid
    return SteinbergElement(g, tuple(conjugate(f.values[g.inverse_of[a]]) for a in g.arrows))


# ---- 群环 ℂF(G) ----

BisectionKey = Union[FullBisection, tuple[int, ...]]


@dataclass(frozen=True)
class GroupRingElement:
    """x ∈ ℂF(G)，terms 为 (满 bisection 的箭头元组, 系数)，按规范顺序、无零系数"""

    groupoid: FiniteGroupoid = field(compare=False, repr=False)
    terms: tuple[tuple[tuple[int, ...], Scalar], ...] = ()

    @classmethod
    def from_terms(cls, g: FiniteGroupoid, terms: Iterable[tuple[BisectionKey, object]]) -> "GroupRingElement":
        accumulated: dict[tuple[int, ...], Scalar] = {}
        for key, coefficient in terms:
            if isinstance(key, Bisection):
                _check_same(g, key.groupoid)
                arrows = key.as_full().arrows
            else:
                arrows = FullBisection(g, tuple(key)).arrows
            accumulated[arrows] = accumulated.get(arrows, ZERO) + as_scalar(coefficient)
        return cls(g, tuple(sorted((k, v) for k, v in accumulated.items() if v != ZERO)))

    @classmethod
    def delta(cls, bisection: FullBisection, coefficient=ONE) -> "GroupRingElement":
        """c·δ_U"""
        return cls.from_terms(bisection.groupoid, [(bisection, coefficient)])

    @classmethod
    def identity(cls, g: FiniteGroupoid) -> "GroupRingElement":
        """δ_{G⁰}"""
        return cls.delta(unit_space(g))

    @property
    def coefficients(self) -> dict[tuple[int, ...], Scalar]:
        return dict(self.terms)

    def bisections(self) -> list[FullBisection]:
        return [FullBisection(self.groupoid, arrows) for arrows, _ in self.terms]

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "GroupRingElement") -> "GroupRingElement":
        _check_same(self.groupoid, other.groupoid)
        return GroupRingElement.from_terms(self.groupoid, self.terms + other.terms)

    def __neg__(self) -> "GroupRingElement":
        return GroupRingElement(self.groupoid, tuple((k, -v) for k, v in self.terms))

    def __sub__(self, other: "GroupRingElement") -> "GroupRingElement":
        return self + (-other)

    def scale(self, c) -> "GroupRingElement":
        c = as_scalar(c)
        return GroupRingElement.from_terms(self.groupoid, [(k, c * v) for k, v in self.terms])

    __rmul__ = scale

    def __mul__(self, other: "GroupRingElement") -> "GroupRingElement":
        """δ_A δ_B = δ_{AB}，双线性延拓"""
        _check_same(self.groupoid, other.groupoid)
        g = self.groupoid
        products = []
        for a, c in self.terms:
            left = FullBisection(g, a)
            for b, d in other.terms:
                products.append((left.multiply(FullBisection(g, b)), c * d))
        return GroupRingElement.from_terms(g, products)

    def star(self) -> "GroupRingElement":
        """(c·δ_U)* = conj(c)·δ_{U⁻¹}"""
        g = self.groupoid
        return GroupRingElement.from_terms(
            g, [(FullBisection(g, k).inverse(), conjugate(v)) for k, v in self.terms]
        )

    def to_list(self) -> list[dict]:
        g = self.groupoid
        return [
            {"bisection": [g.label(a) for a in arrows], "coefficient": format_scalar(v)}
            for arrows, v in self.terms
        ]

    def __str__(self):
        g = self.groupoid
        terms = [
            f"({format_scalar(v)})*delta:[{','.join(g.label(a) for a in arrows)}]" for arrows, v in self.terms
        ]
        return " + ".join(terms) or "0"


def pi(x: GroupRingElement) -> SteinbergElement:
    """π(δ_U) = 1_U 的线性延拓"""
    g = x.groupoid
    values = [ZERO] * g.size
    for arrows, coefficient in x.terms:
        for arrow in arrows:
            values[arrow] += coefficient
    return SteinbergElement(g, tuple(values))


# ---- r*、s*、δ₁ ----

def r_star(f: SteinbergElement) -> SteinbergElement:
    """r*f(u) = Σ_{γ∈Gᵘ} f(γ)，单位以外取 0"""
    g = f.groupoid
    values = [ZERO] * g.size
    for arrow, value in enumerate(f.values):
        values[g.range_of[arrow]] += value
    return SteinbergElement(g, tuple(values))


def s_star(f: SteinbergElement) -> SteinbergElement:
    g = f.groupoid
    values = [ZERO] * g.size
    for arrow, value in enumerate(f.values):
        values[g.source_of[arrow]] += value
    return SteinbergElement(g, tuple(values))


def delta1(f: SteinbergElement) -> SteinbergElement:
    return s_star(f) - r_star(f)


# ---- 矩阵表示 T ----

def t_matrix(f: SteinbergElement) -> DomainMatrix:
    g = f.groupoid
    n = g.unit_count
    rows = [[ZERO] * n for _ in range(n)]
    for arrow, value in enumerate(f.values):
        rows[g.range_of[arrow]][g.source_of[arrow]] += value
    return DomainMatrix(rows, (n, n), QQ_I)


def adjoint(matrix: DomainMatrix) -> DomainMatrix:
    """共轭转置 M†"""
    rows = matrix.transpose().to_list()
    return DomainMatrix([[conjugate(v) for v in row] for row in rows], matrix.shape, QQ_I)


def row_sums(matrix: DomainMatrix) -> list[Scalar]:
    return [sum(row, ZERO) for row in matrix.to_list()]


def column_sums(matrix: DomainMatrix) -> list[Scalar]:
    return row_sums(matrix.transpose())


def format_matrix(matrix: DomainMatrix) -> list[list[str]]:
    return [[format_scalar(v) for v in row] for row in matrix.to_list()]


def decompose_fij(f: SteinbergElement) -> dict[tuple[int, int], SteinbergElement]:
    """f_{i,j} = f 在 G^{a_i}_{a_j} 上的限制；Σ f_{i,j} = f"""
    g = f.groupoid
    return {
        (i, j): SteinbergElement.from_mapping(g, {a: f.values[a] for a in g.fiber(i, j)})
        for i in g.units
        for j in g.units
    }


# ---- 随机元素（性质检验用） ----

def random_steinberg(g: FiniteGroupoid, rng: random.Random, density: float = 0.6) -> SteinbergElement:
    return SteinbergElement(
        g, tuple(random_scalar(rng) if rng.random() < density else ZERO for _ in g.arrows)
    )


def random_group_ring(g: FiniteGroupoid, rng: random.Random, max_terms: int = 4) -> GroupRingElement:
    elements = enumerate_full_bisections(g)
    count = rng.randint(1, max_terms)
    return GroupRingElement.from_terms(g, [(rng.choice(elements), random_scalar(rng)) for _ in range(count)])
