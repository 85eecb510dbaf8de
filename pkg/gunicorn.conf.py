# Gunicorn 配置文件
# 部署只读计算接口（WSGI，同步 worker）

bind = "0.0.0.0:10080"

# 计算是 CPU 密集的，worker 数按核数调整
workers = 2
worker_class = "sync"

# F(G) 较大时一次分析可能需要数秒
timeout = 120
keepalive = 2

# 每个 worker 缓存 F(G) 与 PiMatrix，定期重启回收内存
max_requests = 500
max_requests_jitter = 50

accesslog = "logs/gunicorn_access.log"
errorlog = "logs/gunicorn_error.log"
loglevel = "info"

proc_name = "groupoid_lab"

raw_env = [
    "DJANGO_SETTINGS_MODULE=project_base.settings",
]

wsgi_app = "project_base.wsgi:application"

preload_app = False
daemon = False
pidfile = "/tmp/gunicorn_groupoid_lab.pid"
