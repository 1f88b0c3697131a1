"""
URLs do estimador de emparelhamento
"""
from django.urls import path
from . import views_api

urlpatterns = [
    path('estimate/', views_api.estimate, name='emparelhamento_estimate'),
    path('exact/', views_api.exact, name='emparelhamento_exact'),
    path('health/', views_api.health, name='emparelhamento_health'),
]
