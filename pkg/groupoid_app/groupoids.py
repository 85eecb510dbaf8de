"""有限离散群胚：数据模型、构造器与公理校验

约定：
- 箭头用 0..|G|-1 编号，单位（G⁰）排在最前面；`labels` 给出每个箭头的可读名。
- 复合按从右往左读：`compose(α, β) = αβ` 当且仅当 s(α) = r(β) 时有定义，
  且 r(αβ) = r(α)、s(αβ) = s(β)。
- 复合表是显式的 |G|×|G| 表（未定义处为 None），构造器在建表时按结构计算。
"""
import json
import logging
from dataclasses import dataclass, field, replace
from functools import cached_property
from itertools import product as cartesian_product
from pathlib import Path
from typing import Callable, Hashable, Iterable, Optional, Sequence

import jsonschema
from sympy.combinatorics.named_groups import SymmetricGroup

from .exceptions import InvalidGroupoidError

logger = logging.getLogger(__name__)

SCHEMA_DIR = Path(__file__).resolve().parent / "schemas"


@dataclass(frozen=True)
class FiniteGroupoid:
    """有限离散群胚（构造后不可变，可在并发任务间只读共享）"""

    labels: tuple[str, ...]
    unit_count: int
    range_of: tuple[int, ...]
    source_of: tuple[int, ...]
    inverse_of: tuple[int, ...]
    table: tuple[tuple[Optional[int], ...], ...]
    name: str = field(default="", compare=False)

    def __post_init__(self):
        size = len(self.labels)
        if size == 0:
            raise InvalidGroupoidError("群胚不能为空")
        if len(set(self.labels)) != size:
            raise InvalidGroupoidError("箭头标识重复")
        if not 1 <= self.unit_count <= size:
            raise InvalidGroupoidError(f"单位数量非法: {self.unit_count}")
        for name in ("range_of", "source_of", "inverse_of"):
            values = getattr(self, name)
            if len(values) != size:
                raise InvalidGroupoidError(f"{name} 长度应为 {size}")
        if any(not 0 <= u < self.unit_count for u in self.range_of + self.source_of):
            raise InvalidGroupoidError("range/source 必须落在单位集合内")
        if any(not 0 <= a < size for a in self.inverse_of):
            raise InvalidGroupoidError("inverse 指向不存在的箭头")
        if len(self.table) != size or any(len(row) != size for row in self.table):
            raise InvalidGroupoidError(f"复合表形状应为 {size}x{size}")
        for row in self.table:
            for value in row:
                if value is not None and not 0 <= value < size:
                    raise InvalidGroupoidError("复合表指向不存在的箭头")

    def __hash__(self):
        return self._hash

    @cached_property
    def _hash(self) -> int:
        return hash((self.labels, self.unit_count, self.range_of, self.source_of, self.inverse_of, self.table))

    # ---- 基本访问 ----

    @property
    def size(self) -> int:
        return len(self.labels)

    @property
    def units(self) -> range:
        return range(self.unit_count)

    @property
    def arrows(self) -> range:
        return range(self.size)

    def is_unit(self, arrow: int) -> bool:
        return arrow < self.unit_count

    @property
    def non_units(self) -> range:
        return range(self.unit_count, self.size)

    @property
    def is_group(self) -> bool:
        return self.unit_count == 1

    def compose(self, alpha: int, beta: int) -> Optional[int]:
        return self.table[alpha][beta]

    def invert(self, arrow: int) -> int:
        return self.inverse_of[arrow]

    def label(self, arrow: int) -> str:
        return self.labels[arrow]

    @cached_property
    def _index(self) -> dict[str, int]:
        return {label: index for index, label in enumerate(self.labels)}

    def index_of(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise InvalidGroupoidError(f"不存在的箭头: {label}") from None

    # ---- 纤维 Gᵘ、G_v、Gᵘ_v ----

    @cached_property
    def _fibers(self) -> dict[tuple[int, int], tuple[int, ...]]:
        fibers: dict[tuple[int, int], list[int]] = {}
        for arrow in self.arrows:
            fibers.setdefault((self.range_of[arrow], self.source_of[arrow]), []).append(arrow)
        return {key: tuple(value) for key, value in fibers.items()}

    def fiber(self, range_unit: int, source_unit: int) -> tuple[int, ...]:
        """Gᵘ_v：range 为 u、source 为 v 的箭头"""
        return self._fibers.get((range_unit, source_unit), ())

    def range_fiber(self, unit: int) -> tuple[int, ...]:
        """Gᵘ = r⁻¹(u)"""
        return tuple(a for a in self.arrows if self.range_of[a] == unit)

    def source_fiber(self, unit: int) -> tuple[int, ...]:
        """G_u = s⁻¹(u)"""
        return tuple(a for a in self.arrows if self.source_of[a] == unit)

    @cached_property
    def composable_pairs(self) -> tuple[tuple[int, int, int], ...]:
        """G⁽²⁾，以 (α, β, αβ) 三元组给出"""
        return tuple(
            (alpha, beta, self.table[alpha][beta])
            for alpha in self.arrows
            for beta in self.arrows
            if self.table[alpha][beta] is not None
        )

    # ---- 迷向 ----

    def isotropy(self) -> tuple[int, ...]:
        """Iso(G) = {γ : r(γ) = s(γ)}"""
        return tuple(a for a in self.arrows if self.range_of[a] == self.source_of[a])

    def is_all_isotropy(self) -> bool:
        return len(self.isotropy()) == self.size

    def isotropy_order(self, unit: int) -> int:
        return len(self.fiber(unit, unit))

    def nontrivial_isotropy_count(self) -> int:
        return sum(1 for u in self.units if self.isotropy_order(u) > 1)

    def orbits(self) -> "OrbitDecomposition":
        seen: set[int] = set()
        orbits = []
        for unit in self.units:
            if unit in seen:
                continue
            # 合法群胚中 u 的轨道恰为 r(G_u)
            orbit = tuple(sorted({self.range_of[a] for a in self.source_fiber(unit)}))
            seen.update(orbit)
            orbits.append(orbit)
        return OrbitDecomposition(
            orbits=tuple(orbits),
            isotropy_orders=tuple(self.isotropy_order(orbit[0]) for orbit in orbits),
        )

    def with_composition(self, alpha: int, beta: int, value: Optional[int]) -> "FiniteGroupoid":
        """返回只改动一个复合表项的副本（用于构造反例）"""
        rows = [list(row) for row in self.table]
        rows[alpha][beta] = value
        return replace(self, table=tuple(tuple(row) for row in rows))

    def __str__(self):
        return self.name or f"groupoid(|G|={self.size}, |G0|={self.unit_count})"


@dataclass(frozen=True)
class OrbitDecomposition:
    """单位空间在 u ~ v ⇔ Gᵘ_v ≠ ∅ 下的划分，以及每条轨道上的迷向群阶"""

    orbits: tuple[tuple[int, ...], ...]
    isotropy_orders: tuple[int, ...]

    def orbit_of(self, unit: int) -> tuple[int, ...]:
        for orbit in self.orbits:
            if unit in orbit:
                return orbit
        raise InvalidGroupoidError(f"单位 {unit} 不在任何轨道中")

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(orbit) for orbit in self.orbits)


@dataclass(frozen=True)
class ValidationReport:
    """公理校验结果：通过，或第一个被违反的公理及其见证箭头"""

    ok: bool
    axiom: Optional[str] = None
    arrows: tuple[str, ...] = ()
    message: str = "pass"

    def to_dict(self) -> dict:
        return {"ok": self.ok, "axiom": self.axiom, "arrows": list(self.arrows), "message": self.message}


def validate(g: FiniteGroupoid) -> ValidationReport:
    """逐条检查群胚公理，返回第一个违反项"""

    def fail(axiom: str, message: str, *arrows: int) -> ValidationReport:
        names = tuple(g.label(a) for a in arrows)
        return ValidationReport(False, axiom, names, f"{message} at {', '.join(names)}")

    r, s, inv, compose = g.range_of, g.source_of, g.inverse_of, g.compose
    for u in g.units:
        if r[u] != u or s[u] != u:
            return fail("unit_endpoints", "unit range/source violated", u)
    for a in g.arrows:
        if inv[inv[a]] != a:
            return fail("involution", "inverse is not involutive", a)
        if r[inv[a]] != s[a] or s[inv[a]] != r[a]:
            return fail("inverse_endpoints", "inverse endpoints violated", a)
    for a in g.arrows:
        for b in g.arrows:
            if (compose(a, b) is not None) != (s[a] == r[b]):
                return fail("composition_domain", "composition domain violated", a, b)
    for a in g.arrows:
        if compose(a, inv[a]) != r[a]:
            return fail("range_identity", "range identity violated", a)
        if compose(inv[a], a) != s[a]:
            return fail("source_identity", "source identity violated", a)
        if compose(r[a], a) != a:
            return fail("left_unit", "left unit law violated", a)
        if compose(a, s[a]) != a:
            return fail("right_unit", "right unit law violated", a)
    for a, b, ab in g.composable_pairs:
        if r[ab] != r[a] or s[ab] != s[b]:
            return fail("composition_endpoints", "composition endpoints violated", a, b)
    for a, b, ab in g.composable_pairs:
        for c in g.range_fiber(s[b]):
            bc = compose(b, c)
            if compose(ab, c) != compose(a, bc):
                return fail("associativity", "associativity violated", a, b, c)
    for a in g.non_units:
        if compose(a, a) == a:
            return fail("idempotent", "non-unit idempotent", a)
    return ValidationReport(True)


# ---- 构造器 ----

def _assemble(
    keys: Sequence[Hashable],
    is_unit: Callable[[Hashable], bool],
    range_key: Callable[[Hashable], Hashable],
    source_key: Callable[[Hashable], Hashable],
    inverse_key: Callable[[Hashable], Hashable],
    compose_key: Callable[[Hashable, Hashable], Optional[Hashable]],
    label: Callable[[Hashable], str],
    name: str,
) -> FiniteGroupoid:
    """按结构描述组装群胚：单位排前，其余保持给定顺序"""
    ordered = [k for k in keys if is_unit(k)] + [k for k in keys if not is_unit(k)]
    index = {key: i for i, key in enumerate(ordered)}
    table = []
    for alpha in ordered:
        row = []
        for beta in ordered:
            value = compose_key(alpha, beta) if range_key(beta) == source_key(alpha) else None
            row.append(None if value is None else index[value])
        table.append(tuple(row))
    return FiniteGroupoid(
        labels=tuple(label(k) for k in ordered),
        unit_count=sum(1 for k in ordered if is_unit(k)),
        range_of=tuple(index[range_key(k)] for k in ordered),
        source_of=tuple(index[source_key(k)] for k in ordered),
        inverse_of=tuple(index[inverse_key(k)] for k in ordered),
        table=tuple(table),
        name=name,
    )


def make_group(order_table: Sequence[Sequence[int]], labels: Optional[Sequence[str]] = None, name: str = "") -> FiniteGroupoid:
    """由群乘法表构造单单位群胚

    Args:
        order_table: n×n 表，order_table[i][j] = 元素 i 与 j 的乘积（j 先作用）
        labels: 元素名，默认 "0".."n-1"
    Returns:
        FiniteGroupoid: |G⁰| = 1
    """
    n = len(order_table)
    if n == 0:
        raise InvalidGroupoidError("群乘法表不能为空")
    if any(len(row) != n for row in order_table):
        raise InvalidGroupoidError("群乘法表必须是方阵")
    if any(not isinstance(v, int) or not 0 <= v < n for row in order_table for v in row):
        raise InvalidGroupoidError("群乘法表的元素越界")
    labels = list(labels) if labels is not None else [str(i) for i in range(n)]
    if len(labels) != n:
        raise InvalidGroupoidError("元素名数量与乘法表不符")

    identities = [e for e in range(n) if all(order_table[e][x] == x and order_table[x][e] == x for x in range(n))]
    if not identities:
        raise InvalidGroupoidError("乘法表没有单位元")
    identity = identities[0]
    for x in range(n):
        for y in range(n):
            for z in range(n):
                if order_table[order_table[x][y]][z] != order_table[x][order_table[y][z]]:
                    raise InvalidGroupoidError(f"乘法表不满足结合律: ({labels[x]}, {labels[y]}, {labels[z]})")
    inverses = {}
    for x in range(n):
        candidates = [y for y in range(n) if order_table[x][y] == identity and order_table[y][x] == identity]
        if not candidates:
            raise InvalidGroupoidError(f"元素 {labels[x]} 没有逆元")
        inverses[x] = candidates[0]

    keys = [identity] + [x for x in range(n) if x != identity]
    return _assemble(
        keys,
        is_unit=lambda x: x == identity,
        range_key=lambda x: identity,
        source_key=lambda x: identity,
        inverse_key=lambda x: inverses[x],
        compose_key=lambda x, y: order_table[x][y],
        label=lambda x: labels[x],
        name=name or f"group(order={n})",
    )


def cyclic_group(n: int) -> FiniteGroupoid:
    if n < 1:
        raise InvalidGroupoidError(f"循环群阶数必须 ≥ 1: {n}")
    labels = ["e", "g"] + [f"g^{k}" for k in range(2, n)]
    table = [[(i + j) % n for j in range(n)] for i in range(n)]
    return make_group(table, labels[:n], name=f"group:cyclic:{n}")


def symmetric_group(n: int) -> FiniteGroupoid:
    """对称群 S_n，元素以一行记法命名（例如 S₃ 中的 "213"）"""
    if n < 1:
        raise InvalidGroupoidError(f"对称群次数必须 ≥ 1: {n}")
    elements = sorted(SymmetricGroup(n).elements, key=lambda p: p.array_form)
    position = {tuple(p.array_form): i for i, p in enumerate(elements)}
    # sympy 的 p*q 先作用 p；表项 [i][j] 取“先 j 后 i”
    table = [[position[tuple((q * p).array_form)] for q in elements] for p in elements]
    labels = ["".join(str(x + 1) for x in p.array_form) for p in elements]
    return make_group(table, labels, name=f"group:sym:{n}")


def make_pair_groupoid(k: int) -> FiniteGroupoid:
    """k 个点上的对群胚（满等价关系），箭头 i<-j 的 range 为 i、source 为 j"""
    if k < 1:
        raise InvalidGroupoidError(f"对群胚的点数必须 ≥ 1: {k}")
    keys = [(i, j) for i in range(k) for j in range(k)]
    return _assemble(
        keys,
        is_unit=lambda a: a[0] == a[1],
        range_key=lambda a: (a[0], a[0]),
        source_key=lambda a: (a[1], a[1]),
        inverse_key=lambda a: (a[1], a[0]),
        compose_key=lambda a, b: (a[0], b[1]),
        label=lambda a: str(a[0]) if a[0] == a[1] else f"{a[0]}<-{a[1]}",
        name=f"pair:{k}",
    )


def disjoint_union(g1: FiniteGroupoid, g2: FiniteGroupoid) -> FiniteGroupoid:
    """不交并 G₁ ⊔ G₂，两侧之间没有箭头；标签加后缀 @1 / @2"""
    parts = (g1, g2)
    keys = [(k, a) for k, g in enumerate(parts) for a in g.arrows]
    return _assemble(
        keys,
        is_unit=lambda x: parts[x[0]].is_unit(x[1]),
        range_key=lambda x: (x[0], parts[x[0]].range_of[x[1]]),
        source_key=lambda x: (x[0], parts[x[0]].source_of[x[1]]),
        inverse_key=lambda x: (x[0], parts[x[0]].inverse_of[x[1]]),
        compose_key=lambda x, y: (x[0], parts[x[0]].compose(x[1], y[1])) if x[0] == y[0] else None,
        label=lambda x: f"{parts[x[0]].label(x[1])}@{x[0] + 1}",
        name=f"union({g1},{g2})",
    )


def product(g1: FiniteGroupoid, g2: FiniteGroupoid) -> FiniteGroupoid:
    """直积 G₁ × G₂，按分量复合；标签形如 a|b"""
    keys = list(cartesian_product(g1.arrows, g2.arrows))
    return _assemble(
        keys,
        is_unit=lambda x: g1.is_unit(x[0]) and g2.is_unit(x[1]),
        range_key=lambda x: (g1.range_of[x[0]], g2.range_of[x[1]]),
        source_key=lambda x: (g1.source_of[x[0]], g2.source_of[x[1]]),
        inverse_key=lambda x: (g1.inverse_of[x[0]], g2.inverse_of[x[1]]),
        compose_key=lambda x, y: (g1.compose(x[0], y[0]), g2.compose(x[1], y[1])),
        label=lambda x: f"{g1.label(x[0])}|{g2.label(x[1])}",
        name=f"product({g1},{g2})",
    )


# ---- JSON 描述 ----

def _load_schema(name: str) -> dict:
    with open(SCHEMA_DIR / name, encoding="utf-8") as fp:
        return json.load(fp)


def from_json(data: dict, name: str = "") -> FiniteGroupoid:
    """从 JSON 描述构造群胚（先按 schema 校验，公理留给 `validate`）

    单位可以不出现在 arrows 列表中，此时按 range = source = inverse = 自身补全；
    复合表必须显式给出（包括涉及单位的复合），缺项由 `validate` 报告。
    """
    try:
        jsonschema.validate(instance=data, schema=_load_schema("groupoid.schema.json"))
    except jsonschema.ValidationError as exc:
        raise InvalidGroupoidError(f"群胚 JSON 不符合 schema: {exc.message}") from exc

    units = list(data["units"])
    entries = {}
    for entry in data["arrows"]:
        if entry["id"] in entries:
            raise InvalidGroupoidError(f"箭头 id 重复: {entry['id']}")
        entries[entry["id"]] = entry
    for unit in units:
        entries.setdefault(unit, {"id": unit, "range": unit, "source": unit, "inverse": unit})
    unit_set = set(units)
    ordered = units + [a for a in entries if a not in unit_set]
    index = {label: i for i, label in enumerate(ordered)}

    def lookup(label: str, what: str) -> int:
        if label not in index:
            raise InvalidGroupoidError(f"{what} 引用了不存在的箭头: {label}")
        return index[label]

    table: list[list[Optional[int]]] = [[None] * len(ordered) for _ in ordered]
    for alpha, beta, value in data.get("compose", []):
        i, j, k = lookup(alpha, "compose"), lookup(beta, "compose"), lookup(value, "compose")
        if table[i][j] not in (None, k):
            raise InvalidGroupoidError(f"复合 {alpha}·{beta} 给出了两个不同的结果: {ordered[table[i][j]]}, {value}")
        table[i][j] = k
    return FiniteGroupoid(
        labels=tuple(ordered),
        unit_count=len(units),
        range_of=tuple(lookup(entries[a]["range"], "range") for a in ordered),
        source_of=tuple(lookup(entries[a]["source"], "source") for a in ordered),
        inverse_of=tuple(lookup(entries[a]["inverse"], "inverse") for a in ordered),
        table=tuple(tuple(row) for row in table),
        name=name,
    )


def read_json_file(path: str):
    try:
        with open(path, encoding="utf-8") as fp:
            return json.load(fp)
    except (OSError, json.JSONDecodeError) as exc:
        raise InvalidGroupoidError(f"无法读取群胚文件 {path}: {exc}") from exc


def load_json_file(path: str) -> FiniteGroupoid:
    return from_json(read_json_file(path), name=f"file:{path}")


def to_json(g: FiniteGroupoid) -> dict:
    """导出为 JSON 描述（与 `from_json` 互逆）"""
    return {
        "units": [g.label(u) for u in g.units],
        "arrows": [
            {
                "id": g.label(a),
                "range": g.label(g.range_of[a]),
                "source": g.label(g.source_of[a]),
                "inverse": g.label(g.inverse_of[a]),
            }
            for a in g.arrows
        ],
        "compose": [[g.label(a), g.label(b), g.label(ab)] for a, b, ab in g.composable_pairs],
    }
