"""
Tasks Celery do estimador
Instâncias independentes disparadas por run_parallel_instances
"""
from celery import shared_task
import logging

from .services import EstimadorService, EstimatorConfig
from .services_grafo import GrafoService

logger = logging.getLogger('emparelhamento.tasks')


@shared_task
def executar_instancia(texto_grafo, cfg_dict, seed):
    """
    Executa uma instância do estimador

    Args:
        texto_grafo: grafo no formato de lista de arestas ("n m" + pares)
        cfg_dict: EstimatorConfig.to_dict()
        seed: semente da instância

    Returns:
        EstimateReport.to_dict(); exceções propagam para o resultado da task
    """
    g = GrafoService.load_graph(texto_grafo)
    cfg = EstimatorConfig.from_dict(cfg_dict)
    logger.info(f"Instância iniciada: n={g.n} m={g.m} modo={cfg.mode} seed={seed}")

    relatorio = EstimadorService.estimar(g, cfg, seed)

    logger.info(f"Instância seed={seed} concluída: estimativa={relatorio.estimate:.3f}")
    return relatorio.to_dict()
