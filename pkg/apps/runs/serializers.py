from rest_framework import serializers


class RunManifestSerializer(serializers.Serializer):
    """
    Serializer для манифеста запуска
    """
    command = serializers.CharField(read_only=True, help_text='Команда bell4')
    version = serializers.CharField(read_only=True, help_text='Версия программы')
    rng_algorithm = serializers.CharField(read_only=True, help_text='Генератор случайных чисел')
    config = serializers.DictField(read_only=True, help_text='Параметры оптимизатора')
    state = serializers.DictField(read_only=True, allow_null=True, help_text='Описание состояния')
    options = serializers.DictField(read_only=True, help_text='Прочие параметры команды')
    outputs = serializers.ListField(child=serializers.CharField(), read_only=True, help_text='Выходные файлы')


class AnalyzeReportSerializer(serializers.Serializer):
    """
    Serializer для отчёта команды analyze
    """
    values = serializers.ListField(child=serializers.FloatField(), read_only=True, help_text='<D_4^(1)>..<D_4^(4)>')
    omega = serializers.FloatField(read_only=True)
    lemma_sum = serializers.FloatField(read_only=True)
    weighted_norm_sum = serializers.FloatField(read_only=True, help_text='3 singles + triples + 2 Q, 18 for pure states')
    named_norms = serializers.DictField(child=serializers.FloatField(), read_only=True)
    purity = serializers.FloatField(read_only=True)
    spectral_radii = serializers.ListField(child=serializers.FloatField(), read_only=True)
