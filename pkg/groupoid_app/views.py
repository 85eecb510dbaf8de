import logging

from django.http import HttpRequest, JsonResponse
from django.views.decorators.http import require_GET

from .exceptions import GroupoidError, InvalidGroupoidError
from .utils import (
    analysis_payload,
    f2_payload,
    full_group_payload,
    load_groupoid,
    tmatrix_payload,
    validation_payload,
    witness_payload,
)

logger = logging.getLogger(__name__)

# 只读计算接口：参数与同名管理命令一致，返回统一结构 {"code","message","result"}。


def response_ok(data=None):
    return JsonResponse({"code": "2000", "message": "成功!", "result": data}, json_dumps_params={"ensure_ascii": False})


def response_fail(code: str, message: str):
    return JsonResponse({"code": code, "message": message, "result": None}, status=400, json_dumps_params={"ensure_ascii": False})


def _groupoid_param(request: HttpRequest, require_valid: bool = True):
    text = request.GET.get("groupoid")
    if not text:
        raise InvalidGroupoidError("groupoid 参数不能为空")
    if text.strip().startswith("file:"):
        raise InvalidGroupoidError("接口不接受 file: 表达式")
    return load_groupoid(text, require_valid=require_valid)


def _int_param(request: HttpRequest, name: str, default=None):
    value = request.GET.get(name)
    if value in (None, ""):
        if default is None:
            raise InvalidGroupoidError(f"{name} 参数不能为空")
        return default
    try:
        return int(value)
    except ValueError:
        raise InvalidGroupoidError(f"{name} 必须是整数") from None


def _flag(request: HttpRequest, name: str) -> bool:
    return request.GET.get(name, "").lower() in ("1", "true", "yes")


def _respond(compute):
    try:
        return response_ok(compute())
    except GroupoidError as e:
        logger.warning(f"请求失败: {e}")
        return response_fail("3002", str(e))
    except Exception as e:
        logger.exception("接口内部错误")
        return response_fail("3001", f"计算时发生异常: {str(e)}")


@require_GET
def groupoid_validate(request: HttpRequest):
    """校验群胚公理

    请求参数：groupoid
    """
    return _respond(lambda: validation_payload(_groupoid_param(request, require_valid=False)))


@require_GET
def groupoid_full_group(request: HttpRequest):
    """F(G) 的阶与轨道分解

    请求参数：groupoid, cayley(可选)
    """
    return _respond(lambda: full_group_payload(_groupoid_param(request), with_table=_flag(request, "cayley")))


@require_GET
def groupoid_analyze(request: HttpRequest):
    """π 的分析报告

    请求参数：groupoid, witness(可选)
    """
    return _respond(lambda: analysis_payload(_groupoid_param(request), with_witness=_flag(request, "witness")))


@require_GET
def groupoid_witness(request: HttpRequest):
    """请求参数：groupoid, gamma1/gamma2(可选)"""
    return _respond(
        lambda: witness_payload(_groupoid_param(request), request.GET.get("gamma1"), request.GET.get("gamma2"))
    )


@require_GET
def groupoid_tmatrix(request: HttpRequest):
    """请求参数：groupoid, element"""

    def compute():
        element = request.GET.get("element")
        if not element:
            raise InvalidGroupoidError("element 参数不能为空")
        return tmatrix_payload(_groupoid_param(request), element)

    return _respond(compute)


@require_GET
def f2_bounds(request: HttpRequest):
    """请求参数：n_max, radius(可选), check_chain(可选)"""

    def compute():
        n_max = _int_param(request, "n_max")
        radius = request.GET.get("radius")
        payload, _ = f2_payload(n_max, _int_param(request, "radius") if radius else None, _flag(request, "check_chain"))
        return payload

    return _respond(compute)
