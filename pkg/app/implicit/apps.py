from django.apps import AppConfig


class ImplicitConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'implicit'
