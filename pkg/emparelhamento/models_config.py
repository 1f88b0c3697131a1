"""
Configurações do benchmark armazenadas no banco
Sobrepõem os padrões de settings.EMPARELHAMENTO sem redeploy
"""
import json

from django.core.cache import cache
from django.core.exceptions import ValidationError
from django.db import models


class ConfiguracaoBenchmark(models.Model):
    """
    Parâmetro global do benchmark (ex.: EXACT_CAP_BIPARTIDO)
    """

    PREFIXO_CACHE = 'emparelhamento:config:'
    TIMEOUT_CACHE = 300

    chave = models.CharField(
        max_length=100,
        unique=True,
        db_index=True,
        help_text="Chave única da configuração (ex: EXACT_CAP_GERAL)"
    )
    descricao = models.TextField(blank=True, default='')
    tipo_valor = models.CharField(
        max_length=20,
        choices=[
            ('INT', 'Número Inteiro'),
            ('FLOAT', 'Número Decimal'),
            ('BOOL', 'Booleano'),
            ('STRING', 'Texto'),
            ('JSON', 'JSON')
        ]
    )
    valor_texto = models.TextField(
        help_text="Valor armazenado como texto (convertido conforme tipo_valor)"
    )
    is_active = models.BooleanField(default=True)

    created_at = models.DateTimeField(auto_now_add=True)
    updated_at = models.DateTimeField(auto_now=True)

    class Meta:
        db_table = 'emparelhamento_configuracao'
        verbose_name = 'Configuração do Benchmark'
        verbose_name_plural = 'Configurações do Benchmark'
        ordering = ['chave']

    def __str__(self):
        return f"{self.chave} = {self.valor_texto}"

    def save(self, *args, **kwargs):
        super().save(*args, **kwargs)
        cache.delete(self.PREFIXO_CACHE + self.chave)

    def get_valor(self):
        """Retorna valor convertido para o tipo correto"""
        try:
            if self.tipo_valor == 'INT':
                return int(self.valor_texto)
            elif self.tipo_valor == 'FLOAT':
                return float(self.valor_texto)
            elif self.tipo_valor == 'BOOL':
                return self.valor_texto.lower() in ['true', '1', 'sim', 'yes']
            elif self.tipo_valor == 'JSON':
                return json.loads(self.valor_texto)
            return self.valor_texto
        except (ValueError, TypeError) as e:
            raise ValidationError(f"Erro ao converter {self.chave}: {e}")

    @classmethod
    def get_config(cls, chave, default=None):
        """
        Busca configuração ativa por chave, com cache

        Args:
            chave: Chave da configuração
            default: Valor padrão se não encontrar

        Returns:
            Valor convertido ou default
        """
        chave_cache = cls.PREFIXO_CACHE + chave
        em_cache = cache.get(chave_cache)
        if em_cache is not None:
            return em_cache['valor']

        try:
            valor = cls.objects.get(chave=chave, is_active=True).get_valor()
        except cls.DoesNotExist:
            return default
        cache.set(chave_cache, {'valor': valor}, cls.TIMEOUT_CACHE)
        return valor
