# campaigns/urls.py
from django.urls import path

from .views import result_export_view

app_name = 'campaigns'

urlpatterns = [
    path('results/export/', result_export_view, name='result-export'),
]
