from django.apps import AppConfig


class VarindexConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'apps.varindex'
