# campaigns/admin.py
from django.contrib import admin

from .models import CampaignRun, SweepPointResult


class SweepPointResultInline(admin.TabularInline):
    model = SweepPointResult
    extra = 0
    fields = ('sweep_value', 'scheme', 'metric', 'mean', 'stderr', 'ci95', 'trials', 'failed')
    readonly_fields = fields
    can_delete = False


@admin.register(CampaignRun)
class CampaignRunAdmin(admin.ModelAdmin):
    list_display = (
        'name', 'sweep_axis', 'seed', 'trials', 'threads',
        'status', 'failed_trials', 'started_at', 'finished_at',
    )
    list_filter = ('status', 'sweep_axis')
    search_fields = ('name', 'recipe')
    readonly_fields = ('started_at', 'finished_at', 'manifest', 'output_dir')
    inlines = [SweepPointResultInline]


@admin.register(SweepPointResult)
class SweepPointResultAdmin(admin.ModelAdmin):
    list_display = ('run', 'scheme', 'metric', 'sweep_value', 'mean', 'stderr', 'trials', 'failed')
    list_filter = ('scheme', 'metric', 'run__sweep_axis')
    search_fields = ('metric', 'run__name')
