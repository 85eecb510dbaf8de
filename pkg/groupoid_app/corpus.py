"""随机群胚语料与批量校验（verify）

语料由种子完全确定：先放入覆盖各判据分支与全部见证情形的锚点，再按构造子权重随机抽取。
每个实例只以表达式文本在进程间传递，逐项检查判据与线性代数对照是否一致。
"""
import logging
import random
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional

from django.conf import settings

from .analysis import (
    arrows_in_image,
    image_dimension,
    injective_by_theorem,
    kernel_basis,
    membership_in_image,
    surjective_by_theorem,
)
from .bisections import (
    check_full_group_cap,
    enumerate_bisections,
    enumerate_full_bisections,
    full_group_order,
    naive_full_bisections,
)
from .exceptions import EnumerationTooLargeError, GroupoidError
from .expressions import (
    GroupExpr,
    GroupoidExpr,
    PairExpr,
    ProductExpr,
    UnionExpr,
    arrow_count,
    build_groupoid,
    parse_expr,
)
from .groupoids import FiniteGroupoid
from .scalars import ZERO
from .steinberg import (
    SteinbergElement,
    adjoint,
    column_sums,
    convolve,
    delta1,
    involute,
    pi,
    r_star,
    random_group_ring,
    random_steinberg,
    row_sums,
    s_star,
    t_matrix,
)
from .witnesses import case_key, noninjectivity_witness

logger = logging.getLogger(__name__)

FAMILIES = ("group", "pair", "product", "union")

# 覆盖条件 (1) 与情形 (i)–(v) 的锚点，按所属构造子族登记
ANCHORS = (
    ("union", "union(group:cyclic:2,group:cyclic:2)"),
    ("pair", "pair:3"),
    ("union", "union(pair:2,pair:2)"),
    ("union", "union(group:cyclic:2,pair:2)"),
    ("product", "product(pair:2,group:cyclic:2)"),
    ("product", "product(group:cyclic:2,pair:2)"),
)

CHECKS = (
    "injectivity",
    "surjectivity",
    "density",
    "point_masses_outside_image",
    "witness",
    "matrix_representation",
    "star_homomorphism",
    "unit_sums",
    "row_column_sums",
    "full_bisection_membership",
    "enumeration_oracle",
    "order_formula",
    "rank_nullity",
)


@dataclass(frozen=True)
class CorpusPlan:
    seed: int = 1
    count: int = 50
    size_cap: int = 16
    weights: dict[str, float] = field(default_factory=lambda: {"group": 1.0, "pair": 1.0, "product": 1.0, "union": 2.0})

    def to_dict(self) -> dict:
        return {"seed": self.seed, "count": self.count, "size_cap": self.size_cap, "weights": dict(self.weights)}


def parse_weights(text: str) -> dict[str, float]:
    """"group=1,pair=0,product=1,union=2" → 权重字典，未列出的族取 0"""
    weights = {family: 0.0 for family in FAMILIES}
    for part in filter(None, (p.strip() for p in text.split(","))):
        name, _, value = part.partition("=")
        if name not in weights:
            raise GroupoidError(f"未知的构造子族: {name!r}")
        try:
            weights[name] = float(value)
        except ValueError:
            raise GroupoidError(f"非法权重: {part!r}") from None
    if not any(w > 0 for w in weights.values()):
        raise GroupoidError("至少一个构造子族的权重须为正")
    return weights


def _group(rng: random.Random) -> GroupoidExpr:
    if rng.random() < 0.75:
        return GroupExpr("cyclic", rng.randint(1, 8))
    return GroupExpr("sym", rng.randint(1, 3))


def _pair(rng: random.Random) -> GroupoidExpr:
    return PairExpr(rng.randint(1, 4))


def _product(rng: random.Random) -> GroupoidExpr:
    pair = PairExpr(rng.randint(1, 3))
    group = GroupExpr("cyclic", rng.randint(1, 4)) if rng.random() < 0.8 else GroupExpr("sym", rng.randint(1, 3))
    return ProductExpr(pair, group) if rng.random() < 0.5 else ProductExpr(group, pair)


def _union(rng: random.Random) -> GroupoidExpr:
    pieces = [rng.choice((_group, _pair, _product))(rng) for _ in range(rng.randint(2, 3))]
    expr = pieces[0]
    for piece in pieces[1:]:
        expr = UnionExpr(expr, piece)
    return expr


_DRAW: dict[str, Callable[[random.Random], GroupoidExpr]] = {
    "group": _group,
    "pair": _pair,
    "product": _product,
    "union": _union,
}


def generate_corpus(plan: CorpusPlan) -> list[str]:
    """按种子生成 count 个表达式，|G| 超过 size_cap 的抽样会重抽"""
    rng = random.Random(plan.seed)
    families = [f for f in FAMILIES if plan.weights.get(f, 0) > 0]
    weights = [plan.weights[f] for f in families]
    corpus = [
        text for family, text in ANCHORS
        if plan.weights.get(family, 0) > 0 and arrow_count(parse_expr(text)) <= plan.size_cap
    ][:plan.count]
    while len(corpus) < plan.count:
        for _ in range(100):
            expr = _DRAW[rng.choices(families, weights)[0]](rng)
            if arrow_count(expr) <= plan.size_cap:
                corpus.append(expr.to_text())
                break
        else:
            raise GroupoidError(f"size_cap={plan.size_cap} 太小，无法抽到实例")
    return corpus


# ---- 单实例校验 ----

def _random_checks(g: FiniteGroupoid, trials: int, seed: int) -> dict[str, bool]:
    rng = random.Random(seed)
    unit_indicator = SteinbergElement.indicator(g, g.units)
    results = {
        "matrix_representation": True,
        "star_homomorphism": True,
        "unit_sums": True,
        "row_column_sums": True,
    }
    for _ in range(trials):
        f, h = random_steinberg(g, rng), random_steinberg(g, rng)
        tf = t_matrix(f)
        if t_matrix(convolve(f, h)) != tf * t_matrix(h) or t_matrix(involute(f)) != adjoint(tf):
            results["matrix_representation"] = False
        if row_sums(tf) != [r_star(f)[u] for u in g.units] or column_sums(tf) != [s_star(f)[u] for u in g.units]:
            results["row_column_sums"] = False

        x, y = random_group_ring(g, rng), random_group_ring(g, rng)
        px = pi(x)
        if pi(x * y) != convolve(px, pi(y)) or pi(x.star()) != involute(px):
            results["star_homomorphism"] = False
        total = sum((c for _, c in x.terms), ZERO)
        expected = unit_indicator.scale(total)
        if not delta1(px).is_zero or r_star(px) != expected or s_star(px) != expected:
            results["unit_sums"] = False
        tpx = t_matrix(px)
        if set(row_sums(tpx)) | set(column_sums(tpx)) != {total}:
            results["row_column_sums"] = False
    return results


def verify_instance(text: str, trials: int, seed: int) -> dict:
    """对一个表达式跑全部检查；|F(G)| 超上限时标记为跳过"""
    result = {"expression": text, "skipped": False, "checks": {}, "witness_case": None, "errors": []}
    try:
        g = build_groupoid(text)
        check_full_group_cap(g)
    except EnumerationTooLargeError as exc:
        logger.info(f"跳过 {text}: {exc}")
        result["skipped"] = True
        return result

    checks: dict[str, bool] = {}
    elements = enumerate_full_bisections(g)
    basis = kernel_basis(g)
    rank = image_dimension(g)
    injective = injective_by_theorem(g).value
    surjective = surjective_by_theorem(g).value

    checks["injectivity"] = (not basis) == injective
    checks["surjectivity"] = (rank == g.size) == surjective == g.is_group
    checks["density"] = (rank == g.size) == surjective
    checks["rank_nullity"] = rank + len(basis) == len(elements) and all(pi(a).is_zero for a in basis)
    checks["order_formula"] = full_group_order(g) == len(elements)
    checks["point_masses_outside_image"] = g.is_group or not arrows_in_image(g)

    if not injective:
        try:
            witness = noninjectivity_witness(g)
            checks["witness"] = witness.is_valid
            result["witness_case"] = case_key(witness)
        except GroupoidError as exc:
            checks["witness"] = False
            result["errors"].append(f"witness: {exc}")

    checks.update(_random_checks(g, trials, seed))

    if g.size <= settings.NAIVE_ORACLE_ARROW_CAP:
        checks["enumeration_oracle"] = set(naive_full_bisections(g)) == set(elements)
        checks["full_bisection_membership"] = all(
            b.is_full or not membership_in_image(g, SteinbergElement.indicator(g, b.arrows))[0]
            for b in enumerate_bisections(g)
        )

    result["checks"] = checks
    failed = [name for name, ok in checks.items() if not ok]
    if failed:
        logger.error(f"{text}: 检查失败 {failed}")
    else:
        logger.info(f"{text}: {len(checks)} 项检查通过")
    return result


def run_verify(plan: CorpusPlan, trials: Optional[int] = None, workers: Optional[int] = None) -> dict:
    """生成语料并逐个校验，按实例顺序汇总

    Returns:
        dict: seed/count/size_cap、instances、skipped、每项检查的通过/失败计数、
        见证情形直方图、失败明细以及总结论 ok
    """
    trials = settings.VERIFY_TRIALS if trials is None else trials
    workers = settings.VERIFY_WORKERS if workers is None else workers
    corpus = generate_corpus(plan)
    arguments = [(text, trials, plan.seed * 100003 + i) for i, text in enumerate(corpus)]
    logger.info(f"开始校验: seed={plan.seed} count={plan.count} workers={workers}")

    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            results = list(executor.map(verify_instance, *zip(*arguments)))
    else:
        results = [verify_instance(*args) for args in arguments]

    tally = {name: {"passed": 0, "failed": 0} for name in CHECKS}
    cases: Counter = Counter()
    failures = []
    for result in results:
        for name, ok in result["checks"].items():
            tally[name]["passed" if ok else "failed"] += 1
            if not ok:
                failures.append({"expression": result["expression"], "check": name})
        for error in result["errors"]:
            failures.append({"expression": result["expression"], "check": error})
        if result["witness_case"]:
            cases[result["witness_case"]] += 1

    summary = {
        **plan.to_dict(),
        "trials": trials,
        "instances": len(results),
        "skipped": sum(1 for r in results if r["skipped"]),
        "checks": tally,
        "witness_cases": dict(sorted(cases.items())),
        "failures": failures,
        "ok": not failures,
    }
    logger.info(f"校验结束: 实例 {summary['instances']}，跳过 {summary['skipped']}，失败 {len(failures)}")
    return summary
