from django.apps import AppConfig


class PutcurveConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'apps.putcurve'
