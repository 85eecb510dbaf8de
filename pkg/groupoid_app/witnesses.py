"""π 非单射时的构造性见证：非零 a ∈ ℂF(G) 且 π(a) = 0

离散情形下参与构造的 bisection 都是单点 B = {γ}，R 为剩余单位。
条件 (1)（G = Iso(G) 且至少两个非平凡迷向群）取最小的两个带非平凡迷向的单位；
条件 (2)（G ≠ Iso(G) 且 |G \\ G⁰| ≥ 3）取字典序最小的 (γ₁, γ₂)，满足
γ₂ 不在迷向中、γ₁ ≠ γ₂、γ₁ ≠ γ₂⁻¹，再经求逆或替换归约到四种情形：

    (i)   γ₁ 非迷向，s(γ₁) = r(γ₂)，s(γ₂) ≠ r(γ₁)
    (ii)  γ₁、γ₂ 的端点两两不同
    (iii) γ₁ 是 u 处的环，u ∉ {r(γ₂), s(γ₂)}
    (iv)  γ₁ 是 r(γ₂) 处的环
    (v)   两者端点集合相同：用 γ₂γ₁ 替换 γ₁ 后落入 (iv)
"""
import logging
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .analysis import injective_by_theorem
from .bisections import FullBisection, unit_space
from .exceptions import PreconditionError
from .groupoids import FiniteGroupoid
from .steinberg import GroupRingElement, pi

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Witness:
    groupoid: FiniteGroupoid = field(compare=False, repr=False)
    case: str
    selected: tuple[int, int]
    gamma1: int
    gamma2: int
    bisections: tuple[tuple[str, FullBisection], ...]
    element: GroupRingElement
    reduced_from: Optional[str] = None

    @property
    def is_valid(self) -> bool:
        return not self.element.is_zero and pi(self.element).is_zero

    def to_dict(self) -> dict:
        g = self.groupoid
        return {
            "case": self.case,
            "reduced_from": self.reduced_from,
            "selected": [g.label(a) for a in self.selected],
            "gamma1": g.label(self.gamma1),
            "gamma2": g.label(self.gamma2),
            "bisections": {name: b.labels() for name, b in self.bisections},
            "element": self.element.to_list(),
            "expression": str(self.element),
            "pi_is_zero": pi(self.element).is_zero,
        }


class _Builder:
    """按名字收集满 bisection，再按系数组合成群环元素"""

    def __init__(self, g: FiniteGroupoid, rest: Iterable[int]):
        self.g = g
        self.rest = tuple(rest)
        self.named: list[tuple[str, FullBisection]] = []

    def add(self, name: str, *arrows: int) -> FullBisection:
        bisection = FullBisection(self.g, tuple(arrows) + self.rest)
        self.named.append((name, bisection))
        return bisection

    def combine(self, coefficients: dict[str, int]) -> GroupRingElement:
        lookup = dict(self.named)
        lookup["G0"] = unit_space(self.g)
        return GroupRingElement.from_terms(self.g, [(lookup[name], c) for name, c in coefficients.items()])


def _remaining_units(g: FiniteGroupoid, *used: int) -> list[int]:
    return [u for u in g.units if u not in used]


def _condition_one(g: FiniteGroupoid, gamma1: Optional[int], gamma2: Optional[int]) -> Witness:
    if gamma1 is None or gamma2 is None:
        loops = [u for u in g.units if g.isotropy_order(u) > 1]
        u, v = loops[0], loops[1]
        gamma1 = next(a for a in g.fiber(u, u) if not g.is_unit(a))
        gamma2 = next(a for a in g.fiber(v, v) if not g.is_unit(a))
    u, v = g.range_of[gamma1], g.range_of[gamma2]
    if g.is_unit(gamma1) or g.is_unit(gamma2) or u == v:
        raise PreconditionError("条件 (1) 需要两个不同单位处的非平凡环")
    builder = _Builder(g, _remaining_units(g, u, v))
    builder.add("U1", gamma1, v)
    builder.add("U2", u, gamma2)
    builder.add("U3", gamma1, gamma2)
    element = builder.combine({"U1": 1, "U2": 1, "U3": -1, "G0": -1})
    return Witness(g, "condition_1", (gamma1, gamma2), gamma1, gamma2, tuple(builder.named), element)


def _admissible(g: FiniteGroupoid, gamma1: int, gamma2: int) -> bool:
    non_isotropy = g.range_of[gamma2] != g.source_of[gamma2]
    return (
        not g.is_unit(gamma1)
        and non_isotropy
        and gamma1 != gamma2
        and gamma1 != g.inverse_of[gamma2]
    )


def select_pair(g: FiniteGroupoid) -> tuple[int, int]:
    """字典序最小的可用 (γ₁, γ₂)"""
    non_isotropy = [a for a in g.non_units if g.range_of[a] != g.source_of[a]]
    for gamma1 in g.non_units:
        for gamma2 in non_isotropy:
            if _admissible(g, gamma1, gamma2):
                return gamma1, gamma2
    raise PreconditionError("找不到满足条件的 (γ1, γ2)")


def _case_i(g: FiniteGroupoid, gamma1: int, gamma2: int) -> tuple[_Builder, GroupRingElement]:
    r1, s1, s2 = g.range_of[gamma1], g.source_of[gamma1], g.source_of[gamma2]
    inv = g.inverse_of
    product = g.compose(gamma1, gamma2)
    builder = _Builder(g, _remaining_units(g, r1, s1, s2))
    builder.add("U", gamma1, gamma2, inv[product])
    builder.add("U_inv", inv[gamma1], inv[gamma2], product)
    builder.add("U1", gamma1, inv[gamma1], s2)
    builder.add("U2", gamma2, inv[gamma2], r1)
    builder.add("U3", product, inv[product], s1)
    return builder, builder.combine({"U": 1, "U_inv": 1, "U1": -1, "U2": -1, "U3": -1, "G0": 1})


def _case_ii(g: FiniteGroupoid, gamma1: int, gamma2: int) -> tuple[_Builder, GroupRingElement]:
    r1, s1 = g.range_of[gamma1], g.source_of[gamma1]
    r2, s2 = g.range_of[gamma2], g.source_of[gamma2]
    inv = g.inverse_of
    builder = _Builder(g, _remaining_units(g, r1, s1, r2, s2))
    builder.add("U1", gamma1, inv[gamma1], r2, s2)
    builder.add("U2", gamma2, inv[gamma2], r1, s1)
    builder.add("U3", gamma1, inv[gamma1], gamma2, inv[gamma2])
    return builder, builder.combine({"U1": 1, "U2": 1, "U3": -1, "G0": -1})


def _case_iii(g: FiniteGroupoid, gamma1: int, gamma2: int) -> tuple[_Builder, GroupRingElement]:
    u = g.range_of[gamma1]
    r2, s2 = g.range_of[gamma2], g.source_of[gamma2]
    inv = g.inverse_of
    builder = _Builder(g, _remaining_units(g, u, r2, s2))
    builder.add("U1", u, gamma2, inv[gamma2])
    builder.add("U2", gamma1, r2, s2)
    builder.add("U3", gamma1, gamma2, inv[gamma2])
    return builder, builder.combine({"U1": 1, "U2": 1, "U3": -1, "G0": -1})


def _case_iv(g: FiniteGroupoid, gamma1: int, gamma2: int) -> tuple[_Builder, GroupRingElement]:
    r2, s2 = g.range_of[gamma2], g.source_of[gamma2]
    inv = g.inverse_of
    product = g.compose(gamma1, gamma2)
    builder = _Builder(g, _remaining_units(g, r2, s2))
    builder.add("U1", gamma2, inv[product])
    builder.add("U2", product, inv[gamma2])
    builder.add("U3", gamma2, inv[gamma2])
    builder.add("U4", product, inv[product])
    return builder, builder.combine({"U1": 1, "U2": 1, "U3": -1, "U4": -1})


_CASES = {"i": _case_i, "ii": _case_ii, "iii": _case_iii, "iv": _case_iv}


def classify(g: FiniteGroupoid, gamma1: int, gamma2: int) -> tuple[str, int, int, Optional[str]]:
    """把可用的 (γ₁, γ₂) 归约到 (i)–(iv)，返回 (情形, γ₁, γ₂, 原情形)"""
    r, s, inv = g.range_of, g.source_of, g.inverse_of
    if r[gamma1] == s[gamma1]:
        u = r[gamma1]
        if u not in (r[gamma2], s[gamma2]):
            return "iii", gamma1, gamma2, None
        if r[gamma2] != u:
            gamma2 = inv[gamma2]
        return "iv", gamma1, gamma2, None

    ends1 = {r[gamma1], s[gamma1]}
    ends2 = {r[gamma2], s[gamma2]}
    shared = ends1 & ends2
    if not shared:
        return "ii", gamma1, gamma2, None
    if len(shared) == 1:
        for a, b in ((gamma1, gamma2), (inv[gamma1], gamma2), (gamma1, inv[gamma2]), (inv[gamma1], inv[gamma2])):
            if s[a] == r[b] and s[b] != r[a]:
                return "i", a, b, None
        raise PreconditionError("无法归约到情形 (i)")
    # 端点集合相同：先让 s(γ₁) = r(γ₂)，再以 γ₂γ₁（s(γ₁) 处的环）替换 γ₁
    if s[gamma1] != r[gamma2]:
        gamma2 = inv[gamma2]
    loop = g.compose(gamma2, gamma1)
    return "iv", loop, gamma2, "v"


def noninjectivity_witness(
    g: FiniteGroupoid, gamma1: Optional[int] = None, gamma2: Optional[int] = None
) -> Witness:
    """构造 ker π 中的非零元素

    Args:
        g: 群胚，要求判据给出 π 非单射
        gamma1, gamma2: 可选，指定参与构造的两支箭头（否则按字典序自动选取）
    Returns:
        Witness: 含情形、所用 bisection 与元素 a
    """
    verdict = injective_by_theorem(g)
    if verdict.value:
        raise PreconditionError(f"π 是单射（条件 ({verdict.condition})），不存在非零核元")
    if (gamma1 is None) != (gamma2 is None):
        raise PreconditionError("gamma1 与 gamma2 需要同时给出")

    if g.is_all_isotropy():
        witness = _condition_one(g, gamma1, gamma2)
    else:
        if gamma1 is None:
            gamma1, gamma2 = select_pair(g)
        elif not _admissible(g, gamma1, gamma2):
            raise PreconditionError(
                f"({g.label(gamma1)}, {g.label(gamma2)}) 不满足 γ2 非迷向、γ1 ≠ γ2、γ1 ≠ γ2⁻¹"
            )
        case, a, b, reduced_from = classify(g, gamma1, gamma2)
        builder, element = _CASES[case](g, a, b)
        witness = Witness(g, case, (gamma1, gamma2), a, b, tuple(builder.named), element, reduced_from)

    logger.info(
        f"{g}: 见证情形 {witness.case}"
        + (f"（由 {witness.reduced_from} 归约）" if witness.reduced_from else "")
        + f" γ1={g.label(witness.gamma1)} γ2={g.label(witness.gamma2)}"
    )
    return witness


def case_key(witness: Witness) -> str:
    """verify 的情形直方图键：被 (v) 归约的单独计数"""
    return witness.reduced_from or witness.case
