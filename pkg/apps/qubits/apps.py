from django.apps import AppConfig


class QubitsConfig(AppConfig):
    name = 'apps.qubits'
    verbose_name = 'Кубитная алгебра'
