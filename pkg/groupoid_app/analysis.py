"""π 的单射性、满射性与稠密性：定理判据 + 精确线性代数对照

PiMatrix 是 π 的坐标形式：|G|×|F(G)| 的 0/1 矩阵，第 U 列为 1_U。
核、像、原像都从同一次行最简形得到；判据与对照不一致时报告里 `agrees` 为 False，
由调用方（命令行返回码 3、verify 汇总）处理。
"""
import logging
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Optional

from sympy.polys.domains import QQ, QQ_I
from sympy.polys.matrices import DomainMatrix

from .bisections import Bisection, FullBisection, full_group
from .groupoids import FiniteGroupoid
from .scalars import ONE, ZERO
from .steinberg import GroupRingElement, SteinbergElement, _check_same

logger = logging.getLogger(__name__)


class PiMatrix:
    """π 的矩阵，行按箭头、列按 F(G) 规范顺序"""

    def __init__(self, g: FiniteGroupoid, bisections: tuple[FullBisection, ...]):
        self.groupoid = g
        self.bisections = bisections

    @cached_property
    def matrix(self) -> DomainMatrix:
        g = self.groupoid
        rows = [[QQ.zero] * len(self.bisections) for _ in g.arrows]
        for column, bisection in enumerate(self.bisections):
            for arrow in bisection.arrows:
                rows[arrow][column] = QQ.one
        return DomainMatrix(rows, (g.size, len(self.bisections)), QQ)

    @cached_property
    def _reduced(self) -> tuple[list[list], tuple[int, ...]]:
        reduced, pivots = self.matrix.to_sparse().rref()
        return reduced.to_list(), tuple(pivots)

    @property
    def pivots(self) -> tuple[int, ...]:
        return self._reduced[1]

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def kernel_basis(self) -> list[GroupRingElement]:
        """自由列 j 给出一个核向量：x_j = 1，x_{p_i} = -R[i][j]"""
        reduced, pivots = self._reduced
        pivot_set = set(pivots)
        basis = []
        for j in range(len(self.bisections)):
            if j in pivot_set:
                continue
            terms = [(self.bisections[j], ONE)]
            for i, p in enumerate(pivots):
                if reduced[i][j]:
                    terms.append((self.bisections[p], -QQ_I.convert_from(reduced[i][j], QQ)))
            basis.append(GroupRingElement.from_terms(self.groupoid, terms))
        return basis

    def image_basis(self) -> list[FullBisection]:
        """主元列对应的满 bisection，其指示函数张成 π 的像"""
        return [self.bisections[p] for p in self.pivots]

    def solve(self, f: SteinbergElement) -> Optional[GroupRingElement]:
        """若 f 在像中，返回一个原像；否则 None"""
        basis = self.image_basis()
        g = self.groupoid
        width = len(basis)
        rows = [
            [ONE if arrow in b.arrows else ZERO for b in basis] + [f.values[arrow]]
            for arrow in g.arrows
        ]
        reduced, pivots = DomainMatrix(rows, (g.size, width + 1), QQ_I).rref()
        if width in pivots:
            return None
        values = reduced.to_list()
        return GroupRingElement.from_terms(g, [(basis[i], values[i][width]) for i in range(width)])


@lru_cache(maxsize=128)
def pi_matrix(g: FiniteGroupoid) -> PiMatrix:
    return PiMatrix(g, full_group(g))


def kernel_basis(g: FiniteGroupoid) -> list[GroupRingElement]:
    """ker π 的精确基；为空当且仅当 π 单射"""
    return pi_matrix(g).kernel_basis()


def kernel_dimension(g: FiniteGroupoid) -> int:
    matrix = pi_matrix(g)
    return len(matrix.bisections) - matrix.rank


def image_dimension(g: FiniteGroupoid) -> int:
    return pi_matrix(g).rank


def dense_in_full_cstar(g: FiniteGroupoid) -> bool:
    """有限维时像的闭包即像本身，稠密当且仅当像维数 = |G|"""
    return image_dimension(g) == g.size


def membership_in_image(g: FiniteGroupoid, f: SteinbergElement) -> tuple[bool, Optional[GroupRingElement]]:
    _check_same(g, f.groupoid)
    preimage = pi_matrix(g).solve(f)
    return preimage is not None, preimage


def arrows_in_image(g: FiniteGroupoid) -> list[int]:
    """1_γ 落在像中的箭头 γ；非群时应为空"""
    return [a for a in g.arrows if pi_matrix(g).solve(SteinbergElement.point(g, a)) is not None]


@dataclass(frozen=True)
class TheoremVerdict:
    value: bool
    condition: Optional[str] = None
    reason: str = ""

    def to_dict(self) -> dict:
        return {"value": self.value, "condition": self.condition, "reason": self.reason}


def injective_by_theorem(g: FiniteGroupoid) -> TheoremVerdict:
    """π 单射 ⇔ (1) G = Iso(G) 且至多一个非平凡迷向群，或 (2) G ≠ Iso(G) 且 |G \\ G⁰| < 3"""
    non_units = g.size - g.unit_count
    if g.is_all_isotropy():
        count = g.nontrivial_isotropy_count()
        if count <= 1:
            return TheoremVerdict(True, "1", f"all isotropy, {count} nontrivial isotropy group(s)")
        return TheoremVerdict(False, None, f"all isotropy, {count} nontrivial isotropy groups")
    if non_units < 3:
        return TheoremVerdict(True, "2", f"not all isotropy, {non_units} non-units")
    return TheoremVerdict(False, None, f"not all isotropy, {non_units} non-units")


def surjective_by_theorem(g: FiniteGroupoid) -> TheoremVerdict:
    """π 满射 ⇔ G 是群"""
    if g.is_group:
        return TheoremVerdict(True, "group", "|G0| = 1")
    return TheoremVerdict(False, None, f"|G0| = {g.unit_count}")


def non_full_bisection(g: FiniteGroupoid) -> Optional[Bisection]:
    """非空非满 bisection 的一个例子（|G⁰| ≥ 2 时取单个单位）；存在即 π 不满"""
    if g.unit_count < 2:
        return None
    return Bisection(g, (0,))


def has_non_full_bisection(g: FiniteGroupoid) -> bool:
    return non_full_bisection(g) is not None


@dataclass
class AnalysisReport:
    groupoid: str
    arrow_count: int
    unit_count: int
    full_group_order: int
    injective_oracle: bool
    injective_theorem: TheoremVerdict
    surjective_oracle: bool
    surjective_theorem: TheoremVerdict
    kernel_dimension: int
    image_dimension: int
    dense: bool
    is_group: bool
    witness: Optional[dict] = field(default=None)

    @property
    def isomorphism(self) -> bool:
        return self.injective_oracle and self.surjective_oracle

    @property
    def disagreements(self) -> list[str]:
        found = []
        if self.injective_oracle != self.injective_theorem.value:
            found.append("injective")
        if self.surjective_oracle != self.surjective_theorem.value:
            found.append("surjective")
        if self.dense != self.surjective_oracle:
            found.append("dense")
        if self.isomorphism != self.is_group:
            found.append("isomorphism")
        if self.kernel_dimension + self.image_dimension != self.full_group_order:
            found.append("rank_nullity")
        return found

    @property
    def agrees(self) -> bool:
        return not self.disagreements

    def to_dict(self) -> dict:
        return {
            "groupoid": self.groupoid,
            "arrow_count": self.arrow_count,
            "unit_count": self.unit_count,
            "full_group_order": self.full_group_order,
            "injective": {
                "oracle": self.injective_oracle,
                "theorem": self.injective_theorem.value,
                "condition": self.injective_theorem.condition,
                "reason": self.injective_theorem.reason,
            },
            "surjective": {
                "oracle": self.surjective_oracle,
                "theorem": self.surjective_theorem.value,
                "non_full_bisection": not self.is_group,
            },
            "kernel_dimension": self.kernel_dimension,
            "image_dimension": self.image_dimension,
            "dense": self.dense,
            "isomorphism": self.isomorphism,
            "cstar_isomorphism": self.injective_oracle and self.dense,
            "is_group": self.is_group,
            "agrees": self.agrees,
            "disagreements": self.disagreements,
            "witness": self.witness,
        }


def analyze(g: FiniteGroupoid, with_witness: bool = False) -> AnalysisReport:
    """完整分析：判据结论与线性代数对照并列给出"""
    matrix = pi_matrix(g)
    kernel_dim = len(matrix.bisections) - matrix.rank
    report = AnalysisReport(
        groupoid=str(g),
        arrow_count=g.size,
        unit_count=g.unit_count,
        full_group_order=len(matrix.bisections),
        injective_oracle=kernel_dim == 0,
        injective_theorem=injective_by_theorem(g),
        surjective_oracle=matrix.rank == g.size,
        surjective_theorem=surjective_by_theorem(g),
        kernel_dimension=kernel_dim,
        image_dimension=matrix.rank,
        dense=matrix.rank == g.size,
        is_group=g.is_group,
    )
    if with_witness and not report.injective_theorem.value:
        from .witnesses import noninjectivity_witness

        report.witness = noninjectivity_witness(g).to_dict()
    if not report.agrees:
        logger.error(f"{g}: 判据与对照不一致 {report.disagreements}")
    else:
        logger.info(f"{g}: 单射={report.injective_oracle} 满射={report.surjective_oracle} 核维数={kernel_dim}")
    return report
