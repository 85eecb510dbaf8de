"""领域异常

- 所有领域错误都继承自 `GroupoidError`（本身是 ValueError），
  管理命令把它统一转换为退出码 1，HTTP 视图转换为 code "3002"。
"""


class GroupoidError(ValueError):
    """领域错误基类"""


class InvalidGroupoidError(GroupoidError):
    """群胚描述或乘法表非法"""


class EnumerationTooLargeError(GroupoidError):
    """枚举规模超过配置上限"""

    def __init__(self, what: str, size: int, cap: int):
        self.what = what
        self.size = size
        self.cap = cap
        super().__init__(f"enumeration too large: {what} 规模 {size} 超过上限 {cap}")


class PreconditionError(GroupoidError):
    """操作的前置条件不满足"""


class ExpressionError(GroupoidError):
    """表达式解析错误，带出错字符位置"""

    def __init__(self, message: str, position: int, text: str = ""):
        self.position = position
        self.text = text
        super().__init__(f"{message} (位置 {position})")


class ConvergenceError(GroupoidError):
    """幂迭代在迭代上限内未收敛"""
