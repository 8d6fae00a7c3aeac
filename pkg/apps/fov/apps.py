from django.apps import AppConfig


class FovConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'apps.fov'
