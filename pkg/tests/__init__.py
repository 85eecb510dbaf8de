"""测试包：注册 hypothesis 配置（去随机化，关闭单例耗时限制）"""
from hypothesis import HealthCheck, settings as hypothesis_settings

hypothesis_settings.register_profile(
    "groupoid",
    derandomize=True,
    deadline=None,
    max_examples=30,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much],
)
hypothesis_settings.load_profile("groupoid")
