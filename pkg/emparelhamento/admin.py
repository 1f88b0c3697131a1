"""
Admin do benchmark de emparelhamento
"""
from django.contrib import admin

from .models import ExecucaoExperimento, LinhaExperimento
from .models_config import ConfiguracaoBenchmark


class LinhaExperimentoInline(admin.TabularInline):
    model = LinhaExperimento
    extra = 0
    fields = ('ordem', 'gerador', 'modo', 'estimativa', 'mu_exato', 'razao', 'list_probes', 'erro')
    readonly_fields = fields
    can_delete = False


@admin.register(ExecucaoExperimento)
class ExecucaoExperimentoAdmin(admin.ModelAdmin):
    list_display = ('id', 'comando', 'seed', 'total_linhas', 'total_erros', 'created_at')
    list_filter = ('comando', 'created_at')
    readonly_fields = ('created_at',)
    date_hierarchy = 'created_at'
    inlines = [LinhaExperimentoInline]


@admin.register(LinhaExperimento)
class LinhaExperimentoAdmin(admin.ModelAdmin):
    list_display = ('execucao', 'gerador', 'n', 'modo', 'estimativa', 'mu_exato', 'razao', 'list_probes')
    list_filter = ('modo',)
    search_fields = ('gerador', 'erro')


@admin.register(ConfiguracaoBenchmark)
class ConfiguracaoBenchmarkAdmin(admin.ModelAdmin):
    list_display = ('chave', 'valor_texto', 'tipo_valor', 'is_active', 'updated_at')
    list_filter = ('tipo_valor', 'is_active')
    search_fields = ('chave', 'descricao')
    list_editable = ('is_active',)
    readonly_fields = ('created_at', 'updated_at')
