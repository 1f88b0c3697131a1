"""
Configuração do app Emparelhamento
"""
from django.apps import AppConfig


class Emparelhamento(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'emparelhamento'
    verbose_name = 'Estimador de Emparelhamento Máximo'
