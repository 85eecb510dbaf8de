"""Django settings for project_base

- 所有可调参数集中在这里，通过 python-decouple 从环境变量或 `.env` 读取。
- 库代码在调用时读取 `django.conf.settings`，测试用 `override_settings` 覆盖。
- 不使用数据库：群胚、报告都是纯计算结果，只以 JSON/CSV 文件落地。
"""
from pathlib import Path
from decouple import config, Csv


# 项目根目录
BASE_DIR = Path(__file__).resolve().parent.parent

DEBUG = config("DEBUG", default=False, cast=bool)

# 只提供只读计算接口，没有会话与表单，开发环境允许默认密钥
if DEBUG:
    SECRET_KEY = config("SECRET_KEY", default="dev_secret_key_change_in_production")
else:
    SECRET_KEY = config("SECRET_KEY", default="groupoid-lab-insecure-key")

ALLOWED_HOSTS = config("ALLOWED_HOSTS", default="*" if DEBUG else "localhost,127.0.0.1,testserver", cast=Csv())

INSTALLED_APPS = [
    "groupoid_app",
]

MIDDLEWARE = [
    "django.middleware.security.SecurityMiddleware",
    "django.middleware.common.CommonMiddleware",
]

ROOT_URLCONF = "project_base.urls"

WSGI_APPLICATION = "project_base.wsgi.application"

# 无持久化
DATABASES = {}

LANGUAGE_CODE = "zh-hans"
TIME_ZONE = "Asia/Shanghai"
USE_I18N = True
USE_TZ = False


# ---- 计算上限与数值参数 ----

# 表达式描述的 |G| 超过此值时在构造乘法表之前拒绝（validate 是 |G|³）
GROUPOID_ARROW_CAP = config("GROUPOID_ARROW_CAP", default=144, cast=int)
# |F(G)| 超过此值时拒绝枚举（核、像、原像都需要完整的 F(G)）
FULLGROUP_CAP = config("FULLGROUP_CAP", default=5000, cast=int)
# 穷举全部（含非满）bisection 的 |G| 上限
BISECTION_ARROW_CAP = config("BISECTION_ARROW_CAP", default=16, cast=int)
# 2^|G| 子集对照的 |G| 上限
NAIVE_ORACLE_ARROW_CAP = config("NAIVE_ORACLE_ARROW_CAP", default=12, cast=int)
# 打印 Cayley 表的 |F(G)| 上限
CAYLEY_TABLE_LIMIT = config("CAYLEY_TABLE_LIMIT", default=64, cast=int)

# F₂：截断球半径上限（|Ball(9)| = 39365）与幂迭代参数
F2_RADIUS_CAP = config("F2_RADIUS_CAP", default=9, cast=int)
F2_POWER_TOLERANCE = config("F2_POWER_TOLERANCE", default=1e-10, cast=float)
F2_POWER_MAX_ITERATIONS = config("F2_POWER_MAX_ITERATIONS", default=20000, cast=int)
F2_CHAIN_TOLERANCE = config("F2_CHAIN_TOLERANCE", default=1e-9, cast=float)

# verify：每个群胚的随机抽样次数与工作进程数
VERIFY_TRIALS = config("VERIFY_TRIALS", default=1000, cast=int)
VERIFY_WORKERS = config("VERIFY_WORKERS", default=1, cast=int)

# 日志：控制台只留警告，命令的 stdout 只输出结果（--json 时为纯 JSON）
LOG_LEVEL = config("LOG_LEVEL", default="INFO")
LOGGING_DIR = BASE_DIR / "logs"
LOGGING_DIR.mkdir(exist_ok=True)


def _rotating_file(name: str, level: str) -> dict:
    """logs/<name> 按 10MB 轮转，保留 5 份"""
    return {
        "level": level,
        "class": "logging.handlers.RotatingFileHandler",
        "filename": str(LOGGING_DIR / name),
        "maxBytes": 10 * 1024 * 1024,
        "backupCount": 5,
        "formatter": "verbose",
        "encoding": "utf-8",
    }


LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "verbose": {"format": "{levelname} {asctime} {name} {process:d} {message}", "style": "{"},
        "simple": {"format": "{levelname} {name}: {message}", "style": "{"},
    },
    "handlers": {
        "console": {"level": "WARNING", "class": "logging.StreamHandler", "formatter": "simple"},
        "file": _rotating_file("django.log", "INFO"),
        "error_file": _rotating_file("django_error.log", "ERROR"),
        "groupoid_app_file": _rotating_file("groupoid_app.log", "DEBUG"),
    },
    "root": {"handlers": ["console", "file"], "level": LOG_LEVEL},
    "loggers": {
        "django": {"handlers": ["console", "file", "error_file"], "level": LOG_LEVEL, "propagate": False},
        "django.request": {"handlers": ["error_file"], "level": "ERROR", "propagate": False},
        "groupoid_app": {
            "handlers": ["console", "groupoid_app_file", "error_file"],
            "level": LOG_LEVEL,
            "propagate": False,
        },
    },
}

if not DEBUG:
    SECURE_CONTENT_TYPE_NOSNIFF = True
    X_FRAME_OPTIONS = "DENY"
