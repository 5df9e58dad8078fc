from django.apps import AppConfig


class OrbitsConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'orbits'
    verbose_name = 'Shape orbits'

    def ready(self):
        from .log import configure_logging
        configure_logging()
