from django.contrib.admin.views.decorators import staff_member_required
from django.http import HttpResponse

from .exports import build_workbook
from .filters import SweepPointResultFilter
from .models import SweepPointResult
from .runner import AggregateRow


@staff_member_required
def result_export_view(request):
    """Recorded sweep-point results as an xlsx workbook, one sheet per scheme."""
    base_queryset = SweepPointResult.objects.select_related('run')
    filterset = SweepPointResultFilter(request.GET, queryset=base_queryset)
    rows = [
        AggregateRow(
            sweep_axis=result.run.sweep_axis,
            sweep_value=result.sweep_value,
            scheme=result.scheme,
            metric=result.metric,
            mean=result.mean,
            stderr=result.stderr,
            ci95=result.ci95,
            trials=result.trials,
            failed=result.failed,
        )
        for result in filterset.qs
    ]
    wb = build_workbook(rows)
    response = HttpResponse(
        content_type=(
            'application/vnd.openxmlformats-officedocument.'
            'spreadsheetml.sheet'
        )
    )
    response['Content-Disposition'] = 'attachment; filename="campaign_results.xlsx"'
    wb.save(response)
    return response
