import django_filters

from .models import CampaignRun, SchemeId, SweepPointResult


class SweepPointResultFilter(django_filters.FilterSet):
    run = django_filters.ModelChoiceFilter(
        queryset=CampaignRun.objects.all(),
        label='Campaign Run',
    )
    scheme = django_filters.ChoiceFilter(
        choices=SchemeId.choices,
        label='Scheme',
        empty_label='-- Scheme --',
    )
    metric = django_filters.CharFilter(
        lookup_expr='iexact',
        label='Metric',
    )

    class Meta:
        model = SweepPointResult
        fields = ['run', 'scheme', 'metric']
