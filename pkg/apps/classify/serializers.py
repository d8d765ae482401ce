from rest_framework import serializers


class ClassificationReportSerializer(serializers.Serializer):
    """
    Serializer для отчёта классификации
    """
    violations = serializers.ListField(child=serializers.FloatField(), read_only=True)
    omega_max = serializers.FloatField(read_only=True)
    excluded = serializers.SerializerMethodField()
    consistent = serializers.SerializerMethodField()
    tolerance = serializers.FloatField(read_only=True)
    genuinely_multipartite = serializers.BooleanField(read_only=True)
    optimizer = serializers.DictField(read_only=True)

    def get_excluded(self, obj):
        return [c.id for c in obj.excluded]

    def get_consistent(self, obj):
        return [c.id for c in obj.consistent]
