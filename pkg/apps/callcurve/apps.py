from django.apps import AppConfig


class CallcurveConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'apps.callcurve'
