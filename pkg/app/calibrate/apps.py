from django.apps import AppConfig


class CalibrateConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'calibrate'
