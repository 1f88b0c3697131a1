"""
Models do benchmark de emparelhamento
Execuções de experimentos e suas linhas de resultado
"""
from django.db import models


class ExecucaoExperimento(models.Model):
    """
    Uma execução de experimento disparada pela CLI ou pela API
    """

    comando = models.CharField(max_length=20, choices=[
        ('ESTIMATE', 'Estimativa'),
        ('SCALING', 'Estudo de escala'),
        ('API', 'Requisição da API'),
    ], db_index=True)
    parametros = models.JSONField(default=dict, help_text="Argumentos da execução")
    seed = models.BigIntegerField(default=0)
    caminho_csv = models.CharField(max_length=500, blank=True, default='')
    total_linhas = models.IntegerField(default=0)
    total_erros = models.IntegerField(default=0)

    created_at = models.DateTimeField(auto_now_add=True, db_index=True)

    class Meta:
        db_table = 'emparelhamento_execucao'
        verbose_name = 'Execução de Experimento'
        verbose_name_plural = 'Execuções de Experimentos'
        ordering = ['-created_at']

    def __str__(self):
        return f"{self.comando} #{self.pk} ({self.total_linhas} linhas)"


class LinhaExperimento(models.Model):
    """
    Uma linha (spec, modo, trial) de um experimento
    """

    execucao = models.ForeignKey(
        ExecucaoExperimento,
        on_delete=models.CASCADE,
        related_name='linhas'
    )
    ordem = models.IntegerField(help_text="Posição da linha no CSV")

    gerador = models.CharField(max_length=200, db_index=True)
    n = models.IntegerField()
    seed = models.BigIntegerField()
    modo = models.CharField(max_length=20, db_index=True)

    estimativa = models.FloatField(null=True, blank=True)
    mu_exato = models.IntegerField(null=True, blank=True)
    razao = models.FloatField(null=True, blank=True)
    list_probes = models.BigIntegerField(null=True, blank=True)
    matrix_probes = models.BigIntegerField(null=True, blank=True)
    tempo_ms = models.FloatField(null=True, blank=True)
    erro = models.TextField(blank=True, default='')

    class Meta:
        db_table = 'emparelhamento_linha'
        verbose_name = 'Linha de Experimento'
        verbose_name_plural = 'Linhas de Experimentos'
        ordering = ['execucao', 'ordem']
        indexes = [
            models.Index(fields=['gerador', 'modo']),
        ]

    def __str__(self):
        return f"{self.gerador} [{self.modo}] = {self.estimativa}"
