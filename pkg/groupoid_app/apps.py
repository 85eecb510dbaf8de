from django.apps import AppConfig


class GroupoidAppConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "groupoid_app"
    verbose_name = "有限群胚与拓扑满群"
