from django.apps import AppConfig


class CorrelationsConfig(AppConfig):
    name = 'apps.correlations'
    verbose_name = 'Корреляционный тензор'
