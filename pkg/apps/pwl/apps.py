from django.apps import AppConfig


class PwlConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'apps.pwl'
