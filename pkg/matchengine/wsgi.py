"""
WSGI config for matchengine project.
"""
import os
from django.core.wsgi import get_wsgi_application

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'matchengine.settings')
application = get_wsgi_application()
