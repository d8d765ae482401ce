from django.apps import AppConfig


class OptimizeAppConfig(AppConfig):
    name = 'apps.optimize'
    verbose_name = 'Оптимизация настроек измерений'
