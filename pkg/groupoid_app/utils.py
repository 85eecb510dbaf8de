"""命令与接口共用的工具：群胚加载、报告载荷、确定性 JSON、命令基类"""
import json
import logging
from typing import Optional

import pandas as pd
from django.conf import settings
from django.core.management.base import BaseCommand, CommandError

from .analysis import analyze
from .bisections import cayley_table, check_full_group_cap, enumerate_full_bisections, full_group_order, orbit_factorization
from .exceptions import GroupoidError, InvalidGroupoidError
from .expressions import build_groupoid, parse_element
from .free_group import bound_chain_table, f2_table
from .groupoids import FiniteGroupoid, validate
from .steinberg import column_sums, format_matrix, row_sums, t_matrix
from .scalars import format_scalar
from .witnesses import noninjectivity_witness

logger = logging.getLogger(__name__)

# 判据与对照不一致时的退出码
DISAGREEMENT_EXIT = 3


def dump_json(payload) -> str:
    """确定性 JSON：键排序、固定缩进，同样输入逐字节相同"""
    return json.dumps(payload, sort_keys=True, ensure_ascii=False, indent=2)


def load_groupoid(text: str, require_valid: bool = True) -> FiniteGroupoid:
    """解析表达式并构造群胚；require_valid 时不满足公理直接报错"""
    g = build_groupoid(text)
    if require_valid:
        report = validate(g)
        if not report.ok:
            raise InvalidGroupoidError(f"{text}: {report.message}")
    return g


# ---- 报告载荷 ----

def validation_payload(g: FiniteGroupoid) -> dict:
    report = validate(g)
    payload = {
        "groupoid": str(g),
        "arrow_count": g.size,
        "unit_count": g.unit_count,
        "validation": report.to_dict(),
    }
    if report.ok:
        decomposition = g.orbits()
        payload["orbits"] = [[g.label(u) for u in orbit] for orbit in decomposition.orbits]
        payload["isotropy_orders"] = list(decomposition.isotropy_orders)
        payload["is_group"] = g.is_group
        payload["all_isotropy"] = g.is_all_isotropy()
    return payload


def full_group_payload(g: FiniteGroupoid, with_table: bool = False) -> dict:
    order = full_group_order(g)
    payload = {
        "groupoid": str(g),
        "order": order,
        "orbits": orbit_factorization(g),
    }
    if with_table:
        payload["cayley_table"] = cayley_table(g)
        payload["elements"] = [b.labels() for b in enumerate_full_bisections(g)]
    elif order <= settings.CAYLEY_TABLE_LIMIT:
        payload["elements"] = [b.labels() for b in enumerate_full_bisections(g)]
    return payload


def analysis_payload(g: FiniteGroupoid, with_witness: bool = False) -> dict:
    check_full_group_cap(g)
    return analyze(g, with_witness=with_witness).to_dict()


def witness_payload(g: FiniteGroupoid, gamma1: Optional[str] = None, gamma2: Optional[str] = None) -> dict:
    first = g.index_of(gamma1) if gamma1 else None
    second = g.index_of(gamma2) if gamma2 else None
    payload = noninjectivity_witness(g, first, second).to_dict()
    payload["groupoid"] = str(g)
    return payload


def tmatrix_payload(g: FiniteGroupoid, element_text: str) -> dict:
    f = parse_element(g, element_text)
    matrix = t_matrix(f)
    return {
        "groupoid": str(g),
        "element": f.to_dict(),
        "units": [g.label(u) for u in g.units],
        "matrix": format_matrix(matrix),
        "row_sums": [format_scalar(v) for v in row_sums(matrix)],
        "column_sums": [format_scalar(v) for v in column_sums(matrix)],
    }


def frame_records(frame: pd.DataFrame) -> list[dict]:
    """DataFrame → JSON 记录，缺失值写成 null"""
    return frame.astype(object).where(frame.notna(), None).to_dict(orient="records")


def f2_payload(n_max: int, radius: Optional[int] = None, check_chain: bool = False) -> tuple[dict, pd.DataFrame]:
    table = f2_table(n_max, radius)
    payload = {"n_max": n_max, "radius": radius, "rows": frame_records(table)}
    if check_chain and n_max >= 2:
        chain = bound_chain_table(n_max)
        failing = chain.loc[~chain["holds"], "n"].tolist()
        payload["chain"] = {"checked": len(chain), "holds": not failing, "failing_n": failing[:20]}
    return payload, table


# ---- 命令基类 ----

class GroupoidCommand(BaseCommand):
    """统一 --json 输出与错误退出码：领域错误 1，判据不一致 3"""

    def add_arguments(self, parser):
        parser.add_argument(
            "--json",
            action="store_true",
            dest="as_json",
            help="以 JSON 输出",
        )

    def run(self, **options) -> tuple[dict, str]:
        """返回 (JSON 载荷, 人读文本)"""
        raise NotImplementedError

    def failure(self, payload: dict) -> Optional[tuple[str, int]]:
        """需要非零退出时返回 (信息, 退出码)"""
        return None

    def handle(self, *args, **options):
        try:
            payload, text = self.run(**options)
        except GroupoidError as exc:
            logger.error(f"{self.__module__.rsplit('.', 1)[-1]} 失败: {exc}")
            raise CommandError(str(exc), returncode=1) from exc
        self.stdout.write(dump_json(payload) if options["as_json"] else text)
        failure = self.failure(payload)
        if failure:
            message, code = failure
            raise CommandError(message, returncode=code)
