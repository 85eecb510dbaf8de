"""Bisection 与拓扑满群 F(G)

离散有限群胚上每个 bisection 都是紧开的，满 bisection 的全体在集合乘积
AB = {αβ : s(α) = r(β)} 与逐点求逆下构成群 F(G)，单位元为 G⁰。
满 bisection 的规范表示是其箭头的升序元组，F(G) 的枚举顺序按该元组字典序。
"""
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, permutations, product
from math import factorial, prod
from typing import Iterable, Iterator, Optional

from django.conf import settings

from .exceptions import EnumerationTooLargeError, PreconditionError
from .groupoids import FiniteGroupoid

logger = logging.getLogger(__name__)


def is_bisection(g: FiniteGroupoid, arrows: Iterable[int]) -> bool:
    arrows = list(arrows)
    ranges = {g.range_of[a] for a in arrows}
    sources = {g.source_of[a] for a in arrows}
    return len(set(arrows)) == len(arrows) == len(ranges) == len(sources)


def is_full_bisection(g: FiniteGroupoid, arrows: Iterable[int]) -> bool:
    arrows = list(arrows)
    return is_bisection(g, arrows) and len(arrows) == g.unit_count


@dataclass(frozen=True)
class Bisection:
    """箭头子集，r 与 s 在其上都是单射"""

    groupoid: FiniteGroupoid = field(compare=False, repr=False)
    arrows: tuple[int, ...]

    def __post_init__(self):
        if list(self.arrows) != sorted(set(self.arrows)):
            object.__setattr__(self, "arrows", tuple(sorted(set(self.arrows))))
        if not is_bisection(self.groupoid, self.arrows):
            raise PreconditionError(f"不是 bisection: {self.to_text()}")

    @classmethod
    def of(cls, g: FiniteGroupoid, arrows: Iterable[int]):
        return cls(g, tuple(arrows))

    def __len__(self):
        return len(self.arrows)

    def __iter__(self) -> Iterator[int]:
        return iter(self.arrows)

    def __contains__(self, arrow: int) -> bool:
        return arrow in self.arrows

    @property
    def ranges(self) -> frozenset[int]:
        return frozenset(self.groupoid.range_of[a] for a in self.arrows)

    @property
    def sources(self) -> frozenset[int]:
        return frozenset(self.groupoid.source_of[a] for a in self.arrows)

    @property
    def is_full(self) -> bool:
        return len(self.arrows) == self.groupoid.unit_count

    def labels(self) -> list[str]:
        return [self.groupoid.label(a) for a in self.arrows]

    def to_text(self) -> str:
        return "{" + ",".join(self.groupoid.label(a) for a in self.arrows) + "}"

    def multiply(self, other: "Bisection") -> "Bisection":
        """逆半群乘积 AB"""
        _check_same_groupoid(self.groupoid, other.groupoid)
        g = self.groupoid
        arrows = [g.compose(a, b) for a in self.arrows for b in other.arrows if g.source_of[a] == g.range_of[b]]
        return Bisection(g, tuple(arrows))

    def inverse(self) -> "Bisection":
        return Bisection(self.groupoid, tuple(self.groupoid.inverse_of[a] for a in self.arrows))

    def as_full(self) -> "FullBisection":
        return FullBisection(self.groupoid, self.arrows)


@dataclass(frozen=True)
class FullBisection(Bisection):
    """满 bisection：r(B) = s(B) = G⁰，F(G) 的元素"""

    def __post_init__(self):
        super().__post_init__()
        if not self.is_full:
            raise PreconditionError(f"不是满 bisection: {self.to_text()}")

    def multiply(self, other: "Bisection") -> "FullBisection":
        return super().multiply(other).as_full()

    def inverse(self) -> "FullBisection":
        return super().inverse().as_full()


def _check_same_groupoid(g1: FiniteGroupoid, g2: FiniteGroupoid):
    if g1 is not g2 and g1 != g2:
        raise PreconditionError("bisection 属于不同的群胚")


def unit_space(g: FiniteGroupoid) -> FullBisection:
    """G⁰，F(G) 的单位元"""
    return FullBisection(g, tuple(g.units))


def multiply(a: FullBisection, b: FullBisection) -> FullBisection:
    return a.multiply(b)


def invert_bisection(b: FullBisection) -> FullBisection:
    return b.inverse()


def full_group_order(g: FiniteGroupoid) -> int:
    """|F(G)| = Π_O k_O! · h_O^{k_O}（k_O 轨道大小，h_O 迷向群阶）"""
    decomposition = g.orbits()
    return prod(
        factorial(k) * h ** k for k, h in zip(decomposition.sizes, decomposition.isotropy_orders)
    )


def orbit_factorization(g: FiniteGroupoid) -> list[dict]:
    decomposition = g.orbits()
    return [
        {
            "orbit": [g.label(u) for u in orbit],
            "size": len(orbit),
            "isotropy_order": h,
            "factor": factorial(len(orbit)) * h ** len(orbit),
        }
        for orbit, h in zip(decomposition.orbits, decomposition.isotropy_orders)
    ]


def _orbit_choices(g: FiniteGroupoid, orbit: tuple[int, ...]) -> list[tuple[int, ...]]:
    """一条轨道上的全部选择：置换 σ 与每个 u 的 γ_u ∈ G^{σ(u)}_u"""
    choices = []
    for targets in permutations(orbit):
        fibers = [g.fiber(v, u) for u, v in zip(orbit, targets)]
        choices.extend(product(*fibers))
    return choices


def check_full_group_cap(g: FiniteGroupoid, cap: Optional[int] = None) -> int:
    """枚举前用闭式公式检查 |F(G)| 是否超过上限"""
    cap = settings.FULLGROUP_CAP if cap is None else cap
    order = full_group_order(g)
    if order > cap:
        raise EnumerationTooLargeError("F(G)", order, cap)
    return order


@lru_cache(maxsize=256)
def enumerate_full_bisections(g: FiniteGroupoid) -> tuple[FullBisection, ...]:
    """按轨道分解枚举 F(G)，每个满 bisection 恰好一次，按规范顺序排列"""
    per_orbit = [_orbit_choices(g, orbit) for orbit in g.orbits().orbits]
    arrow_sets = sorted(tuple(sorted(a for part in parts for a in part)) for parts in product(*per_orbit))
    logger.debug(f"{g}: 枚举得到 {len(arrow_sets)} 个满 bisection")
    return tuple(FullBisection(g, arrows) for arrows in arrow_sets)


def full_group(g: FiniteGroupoid, cap: Optional[int] = None) -> tuple[FullBisection, ...]:
    """带上限检查的 F(G) 枚举"""
    check_full_group_cap(g, cap)
    return enumerate_full_bisections(g)


def enumerate_bisections(g: FiniteGroupoid, include_empty: bool = False) -> list[Bisection]:
    """全部 bisection（满或不满），按源单位逐个决定“不取”或取一支 range 未被占用的箭头"""
    cap = settings.BISECTION_ARROW_CAP
    if g.size > cap:
        raise EnumerationTooLargeError("bisections (|G|)", g.size, cap)
    result: list[tuple[int, ...]] = []

    def extend(unit: int, chosen: tuple[int, ...], used_ranges: frozenset[int]):
        if unit == g.unit_count:
            if chosen or include_empty:
                result.append(tuple(sorted(chosen)))
            return
        extend(unit + 1, chosen, used_ranges)
        for arrow in g.source_fiber(unit):
            if g.range_of[arrow] not in used_ranges:
                extend(unit + 1, chosen + (arrow,), used_ranges | {g.range_of[arrow]})

    extend(0, (), frozenset())
    return [Bisection(g, arrows) for arrows in sorted(result)]


def naive_full_bisections(g: FiniteGroupoid) -> list[FullBisection]:
    """2^|G| 子集过滤，只作为枚举的对照"""
    cap = settings.NAIVE_ORACLE_ARROW_CAP
    if g.size > cap:
        raise EnumerationTooLargeError("2^|G| subsets (|G|)", g.size, cap)
    found = [
        subset
        for k in range(g.size + 1)
        for subset in combinations(g.arrows, k)
        if is_full_bisection(g, subset)
    ]
    return [FullBisection(g, arrows) for arrows in sorted(found)]


def cayley_table(g: FiniteGroupoid) -> list[list[int]]:
    """F(G) 的乘法表，表项为规范顺序下的下标"""
    order = full_group_order(g)
    if order > settings.CAYLEY_TABLE_LIMIT:
        raise EnumerationTooLargeError("Cayley table", order, settings.CAYLEY_TABLE_LIMIT)
    elements = enumerate_full_bisections(g)
    position = {b.arrows: i for i, b in enumerate(elements)}
    return [[position[a.multiply(b).arrows] for b in elements] for a in elements]
