from django.apps import AppConfig


class NompAppConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'nomp'
    verbose_name = 'NOMP path extraction'
