from django.urls import path
from . import views

urlpatterns = [
    path("groupoid/validate", views.groupoid_validate),
    path("groupoid/full_group", views.groupoid_full_group),
    path("groupoid/analyze", views.groupoid_analyze),
    path("groupoid/witness", views.groupoid_witness),
    path("groupoid/tmatrix", views.groupoid_tmatrix),
    path("f2/bounds", views.f2_bounds),
]
