"""项目根路由：计算接口都挂在 groupoid_app 下"""
from django.urls import path, include

urlpatterns = [
    path("", include("groupoid_app.urls")),
]
