from django.apps import AppConfig


class ClassifyConfig(AppConfig):
    name = 'apps.classify'
    verbose_name = 'Классификация сепарабельности'
