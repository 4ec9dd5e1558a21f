from django.apps import AppConfig

class HarmonicConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'harmonic'
    verbose_name = 'Zonal spherical functions'
