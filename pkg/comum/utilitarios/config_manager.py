"""
ConfigManager para o Match Engine
Resolve banco, cache e parâmetros padrão do estimador a partir do ambiente
"""
import os
from typing import Any, Dict


class ConfigManager:
    """
    Gerenciador de configurações baseado em variáveis de ambiente
    """

    PREFIXO = 'MATCHENGINE_'

    # Valores usados quando a variável MATCHENGINE_<CHAVE> não está definida
    PADROES_ESTIMADOR = {
        'EPSILON': 0.05,
        'PROBE_CAP_FATOR': 64,
        'EXACT_CAP_BIPARTIDO': 5000,
        'EXACT_CAP_GERAL': 2000,
        'LCA_EPSILON': 0.05,
        'LCA_RAIO_MAXIMO': 20000,
        'FATOR_AMOSTRAS_MULTIPLICATIVO': 1.0,
    }

    def __init__(self):
        self.is_production = self._detect_production_environment()

    def _detect_production_environment(self) -> bool:
        """
        Detecta se está em ambiente de produção
        """
        environment = os.getenv('ENVIRONMENT', 'development').lower()
        return environment == 'production'

    def get_database_config(self, base_dir) -> Dict[str, Any]:
        """
        Configuração do banco de resultados

        MySQL compartilhado quando DB_HOST está definido, sqlite local caso contrário.
        """
        host = os.getenv('DB_HOST')
        if not host:
            return {
                'ENGINE': 'django.db.backends.sqlite3',
                'NAME': os.getenv('DB_SQLITE_PATH', str(base_dir / 'matchengine.sqlite3')),
            }

        config = {
            'ENGINE': 'django.db.backends.mysql',
            'NAME': os.getenv('DB_DATABASE', 'matchengine'),
            'USER': os.getenv('DB_USER'),
            'PASSWORD': os.getenv('DB_PASS'),
            'HOST': host,
            'PORT': os.getenv('DB_PORT', '3306'),
            'OPTIONS': {
                'charset': 'utf8mb4',
                'init_command': "SET sql_mode='STRICT_TRANS_TABLES'",
            },
        }

        # Validar campos críticos
        critical_fields = ['USER', 'PASSWORD']
        missing_fields = [field for field in critical_fields if not config.get(field)]
        if missing_fields:
            raise RuntimeError(
                f"ERRO CRÍTICO: DB_HOST definido mas faltam variáveis: {missing_fields}"
            )

        return config

    def get_cache_config(self) -> Dict[str, Any]:
        """
        Redis compartilhado quando REDIS_HOST está definido, memória local caso contrário
        """
        redis_host = os.getenv('REDIS_HOST')
        if not redis_host:
            return {
                'BACKEND': 'django.core.cache.backends.locmem.LocMemCache',
                'LOCATION': 'matchengine',
            }
        return {
            'BACKEND': 'django_redis.cache.RedisCache',
            'LOCATION': f"redis://{redis_host}:{os.getenv('REDIS_PORT', '6379')}/2",
            'OPTIONS': {
                'CLIENT_CLASS': 'django_redis.client.DefaultClient',
            }
        }

    def get_estimator_defaults(self) -> Dict[str, Any]:
        """
        Parâmetros padrão do estimador

        Returns:
            Dict com os padrões, convertidos para o tipo do valor padrão
        """
        config = {}
        for chave, padrao in self.PADROES_ESTIMADOR.items():
            bruto = os.getenv(f"{self.PREFIXO}{chave}")
            if bruto is None:
                config[chave] = padrao
                continue
            try:
                config[chave] = type(padrao)(bruto)
            except ValueError:
                raise RuntimeError(f"Valor inválido para {self.PREFIXO}{chave}: {bruto!r}")
        return config


# Instância global
_config_manager_instance = None

def get_config_manager():
    """
    Retorna a instância do ConfigManager
    """
    global _config_manager_instance
    if _config_manager_instance is None:
        _config_manager_instance = ConfigManager()
    return _config_manager_instance
