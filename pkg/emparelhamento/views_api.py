"""
API REST do estimador de emparelhamento

Endpoints para estimar mu(G) por sondagens e calcular a referência exata
"""
from datetime import datetime

from django.core.cache import cache
from rest_framework import status
from rest_framework.decorators import api_view
from rest_framework.response import Response

from comum.decorators.api_decorators import handle_api_errors, validate_required_params
from comum.utilitarios.logs import registrar_log

from .excecoes import ErroValidacaoGrafo
from .models import ExecucaoExperimento
from .services import EstimadorService, EstimatorConfig
from .services_exato import ExatoService
from .services_experimentos import ExperimentoService
from .services_geradores import GeneratorSpec, GeradorService
from .services_grafo import GrafoService


def _grafo_da_requisicao(dados):
    """Grafo a partir de 'graph' (lista de arestas) ou 'gen' (especificação de gerador)"""
    if dados.get('graph'):
        return GrafoService.load_graph(dados['graph']), None
    if dados.get('gen'):
        spec = GeneratorSpec.parse(dados['gen'])
        return GeradorService.generate(spec), spec.to_string()
    raise ErroValidacaoGrafo("Informe 'graph' ou 'gen'")


@api_view(['POST'])
@handle_api_errors
@validate_required_params(['mode'], um_de=['graph', 'gen'])
def estimate(request):
    """
    Estimativa sublinear do tamanho do emparelhamento máximo

    POST /api/emparelhamento/estimate/

    Body:
    {
        "graph": "4 3\\n0 1\\n1 2\\n2 3",   # ou "gen": "path:n=4"
        "mode": "bipartite",               # bipartite, general, multiplicative, matrix
        "epsilon": 0.1,                    # Opcional
        "k": 100,                          # Opcional, derivado de epsilon
        "seed": 7,                         # Opcional, padrão 0
        "exact_reference": false,          # Opcional
        "instances": 1                     # Opcional, instâncias paralelas
    }

    Returns:
    {
        "sucesso": true,
        "execucao_id": 12,
        "relatorio": {"estimate": 1.93, "mu1": ..., "mu2": ..., "M_size": ..., "probes": {...}, ...}
    }
    """
    dados = request.data
    g, gerador = _grafo_da_requisicao(dados)

    cfg = EstimatorConfig.padrao(
        mode=dados['mode'],
        eps=dados.get('epsilon'),
        k=dados.get('k'),
        exact_reference=bool(dados.get('exact_reference', False)),
    )
    seed = int(dados.get('seed', 0))
    instancias = int(dados.get('instances', 1))

    relatorio = EstimadorService.run_parallel_instances(g, cfg, seed, instancias)

    execucao = ExecucaoExperimento.objects.create(
        comando='API',
        parametros={
            'gen': gerador,
            'n': g.n,
            'm': g.m,
            'config': cfg.to_dict(),
            'instances': instancias,
            'estimate': relatorio.estimate,
        },
        seed=seed,
        total_linhas=1,
    )
    registrar_log('emparelhamento.api',
                  f"Estimativa #{execucao.pk}: n={g.n} modo={cfg.mode} estimativa={relatorio.estimate:.3f}")

    return Response({
        'sucesso': True,
        'execucao_id': execucao.pk,
        'relatorio': relatorio.to_dict(),
    })


@api_view(['POST'])
@handle_api_errors
@validate_required_params([], um_de=['graph', 'gen'])
def exact(request):
    """
    mu(G) exato (Hopcroft-Karp ou Edmonds)

    POST /api/emparelhamento/exact/

    Body: {"graph": "..."} ou {"gen": "..."}

    Returns:
    {"sucesso": true, "mu": 2, "n": 4, "m": 3, "bipartido": true}
    """
    g, _ = _grafo_da_requisicao(request.data)
    bipartido = ExatoService.colorir_bipartido(g) is not None
    limite = ExperimentoService.limite_exato(bipartido)
    if g.n > limite:
        return Response({
            'sucesso': False,
            'erro': f'n={g.n} acima do limite exato ({limite})'
        }, status=status.HTTP_400_BAD_REQUEST)

    return Response({
        'sucesso': True,
        'mu': len(ExatoService.exact_max_matching(g)),
        'n': g.n,
        'm': g.m,
        'bipartido': bipartido,
    })


@api_view(['GET'])
@handle_api_errors
def health(request):
    """
    Health check do serviço

    GET /api/emparelhamento/health/

    Returns:
    {"status": "healthy", "servicos": {"banco": true, "cache": true}, "timestamp": "..."}
    """
    servicos = {}

    try:
        ExecucaoExperimento.objects.exists()
        servicos['banco'] = True
    except Exception:
        servicos['banco'] = False

    try:
        cache.set('emparelhamento:health_check', 'ok', 10)
        servicos['cache'] = cache.get('emparelhamento:health_check') == 'ok'
    except Exception:
        servicos['cache'] = False

    status_geral = 'healthy' if all(servicos.values()) else 'degraded'

    return Response({
        'status': status_geral,
        'servicos': servicos,
        'timestamp': datetime.now().isoformat()
    })
