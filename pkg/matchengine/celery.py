"""
Configuração Celery para o Match Engine
Instâncias paralelas do estimador e trials de experimentos
"""
import os
from celery import Celery

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'matchengine.settings')

app = Celery('matchengine')
app.config_from_object('django.conf:settings', namespace='CELERY')
app.autodiscover_tasks()
