#!/usr/bin/env python3
"""
groupoid_lab 命令入口

用法：
    python manage.py validate|full_group|analyze|witness|tmatrix <群胚表达式> [--json]
    python manage.py f2_bounds --n-max 100 [--radius 9] [--csv out.csv]
    python manage.py verify --seed 1 --count 50
    python manage.py test tests
"""
import os
import sys


def main():
    os.environ.setdefault("DJANGO_SETTINGS_MODULE", "project_base.settings")
    try:
        from django.core.management import execute_from_command_line
    except ImportError as exc:
        raise ImportError("未安装 Django，请先执行 pip install -r requirements.txt") from exc
    execute_from_command_line(sys.argv)


if __name__ == "__main__":
    main()
