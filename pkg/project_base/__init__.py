"""Django 项目初始化"""


