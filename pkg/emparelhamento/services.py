"""
Motor do estimador sublinear de tamanho de emparelhamento máximo
Orquestra esparsificação, oráculos aninhados e amostragem por modo
"""
import logging
import math
import time
from dataclasses import asdict, dataclass, field, fields
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from django.conf import settings

from comum.utilitarios.logs import registrar_log

from .excecoes import (
    ErroExaustaoAmostragem, ErroGrafoNaoBipartido, ErroInstancias,
    ErroRankingDuplicado, ErroValidacaoGrafo,
)
from .services_esparsificacao import EsparsificacaoService, SparsifierConfig
from .services_exato import ApproxConstants, ExatoService, Matching
from .services_grafo import Graph, GrafoService
from .services_lca import LcaConfig, LcaService, UnionSubgraphOracle
from .services_rgmm import Oraculo, OraculoBMatching, OraculoRGMM, RankFunction, splitmix64
from .services_visoes import (
    DuplicatedBipartiteView, EnumeradorVizinhos, InducedSubgraphView, MatrixToListView,
)

logger = logging.getLogger('emparelhamento.estimador')

MODO_BIPARTIDO = 'bipartite'
MODO_GERAL = 'general'
MODO_MULTIPLICATIVO = 'multiplicative'
MODO_MATRIZ = 'matrix'
MODOS = (MODO_BIPARTIDO, MODO_GERAL, MODO_MULTIPLICATIVO, MODO_MATRIZ)

TENTATIVAS_COLISAO = 3
INTERVALO_POLLING = 0.05


def semente64(semente: np.random.SeedSequence) -> int:
    return int(semente.generate_state(1, dtype=np.uint64)[0])


def log_natural(n: int) -> float:
    return math.log(max(n, 2))


@dataclass
class EstimatorConfig:
    """
    Parâmetros de um run do estimador

    k ausente é derivado de eps (menor inteiro > 1/(b eps^3)); r ausente é
    ceil(6 ln^3 n) no momento do run.
    """
    eps: float = 0.05
    k: Optional[int] = None
    r: Optional[int] = None
    mode: str = MODO_BIPARTIDO
    exact_reference: bool = False
    c: Optional[int] = None
    lca_eps: float = 0.05
    fator_amostras: float = 1.0

    def __post_init__(self):
        if not 0 < self.eps < 1:
            raise ErroValidacaoGrafo(f"epsilon deve estar em (0, 1): {self.eps}")
        if self.mode not in MODOS:
            raise ErroValidacaoGrafo(f"Modo desconhecido: {self.mode!r} (válidos: {', '.join(MODOS)})")
        if self.k is None:
            self.k = ApproxConstants.k_para_epsilon(self.eps)
        if self.k < 1:
            raise ErroValidacaoGrafo(f"k deve ser >= 1: {self.k}")
        if self.r is not None and self.r < 1:
            raise ErroValidacaoGrafo(f"r deve ser >= 1: {self.r}")
        if self.fator_amostras <= 0:
            raise ErroValidacaoGrafo(f"fator_amostras deve ser positivo: {self.fator_amostras}")

    @classmethod
    def padrao(cls, **parametros) -> 'EstimatorConfig':
        """Configuração com os padrões de settings.EMPARELHAMENTO; parâmetros None são ignorados"""
        padroes = settings.EMPARELHAMENTO
        valores = {
            'eps': padroes.get('EPSILON', 0.05),
            'lca_eps': padroes.get('LCA_EPSILON', 0.05),
            'fator_amostras': padroes.get('FATOR_AMOSTRAS_MULTIPLICATIVO', 1.0),
        }
        valores.update({chave: valor for chave, valor in parametros.items() if valor is not None})
        return cls(**valores)

    @property
    def b(self) -> float:
        return ApproxConstants.B

    @property
    def kb(self) -> float:
        return self.k * ApproxConstants.B

    @property
    def kb_inteiro(self) -> int:
        return ApproxConstants.kb_inteiro(self.k)

    @property
    def largura(self) -> int:
        return max(self.k, self.kb_inteiro)

    def amostras(self, n: int) -> int:
        if self.r is not None:
            return self.r
        return max(1, math.ceil(6 * log_natural(n) ** 3))

    def to_dict(self) -> Dict[str, Any]:
        dados = asdict(self)
        dados['b'] = self.b
        dados['kb'] = self.kb
        return dados

    @classmethod
    def from_dict(cls, dados: Dict[str, Any]) -> 'EstimatorConfig':
        nomes = {campo.name for campo in fields(cls)}
        return cls(**{chave: valor for chave, valor in dados.items() if chave in nomes})


@dataclass
class EstimateSample:
    r: int = 0
    X: int = 0
    Y: int = 0
    Z: int = 0
    mu_Mp: float = 0.0
    mu_B1: float = 0.0
    mu_B2: float = 0.0


@dataclass
class EstimateReport:
    estimate: float
    mu1: float
    mu2: float
    M_size: int
    probes: Dict[str, Any]
    mode: str
    seed: int
    config: Dict[str, Any]
    sample: Optional[Dict[str, Any]] = None
    detalhes: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, dados: Dict[str, Any]) -> 'EstimateReport':
        nomes = {campo.name for campo in fields(cls)}
        return cls(**{chave: valor for chave, valor in dados.items() if chave in nomes})


class _Execucao:
    """
    Estado de um run: oráculo base, M, sementes derivadas e oráculos memoizados

    Cada papel aleatório recebe um filho próprio de SeedSequence(seed), o
    que isola as fontes de aleatoriedade e torna o run reprodutível.
    """

    PAPEIS = ('esparsificacao', 'pi_linha', 'pi_b1', 'amostras_1', 'pi_b2', 'amostras_2',
              'enumeracao', 'lca')

    def __init__(self, base, n: int, cfg: EstimatorConfig, seed: int):
        if seed < 0:
            raise ErroValidacaoGrafo(f"seed deve ser não negativo: {seed}")
        self.base = base
        self.n = n
        self.cfg = cfg
        self.seed = seed
        self.sementes = dict(zip(self.PAPEIS, np.random.SeedSequence(seed).spawn(len(self.PAPEIS))))
        self.enumerador = EnumeradorVizinhos(base, self.rng('enumeracao'))
        self.M: Optional[Matching] = None
        self._livre: Optional[OraculoRGMM] = None
        self._b1: Optional[OraculoBMatching] = None
        self._b2: Optional[OraculoBMatching] = None

    def rng(self, papel: str) -> np.random.Generator:
        return np.random.default_rng(self.sementes[papel])

    def ranking(self, papel: str) -> RankFunction:
        return RankFunction(semente64(self.sementes[papel]))

    @property
    def vagas(self) -> int:
        """Vértices virtuais amostráveis nas visões duplicadas: n * largura"""
        return self.n * self.cfg.largura

    def oraculo_livre(self) -> OraculoRGMM:
        """GMM(G[V - V(M)], pi') que define M'"""
        if self._livre is None:
            M = self.M
            visao = InducedSubgraphView(self.base, lambda v: v not in M)
            self._livre = OraculoRGMM(visao, self.ranking('pi_linha'), enumerador=self.enumerador)
        return self._livre

    def oraculo_b1(self) -> OraculoBMatching:
        """b-emparelhamento guloso de G[V(M'), V - V(M) - V(M')]; lados consultam o oráculo interno"""
        if self._b1 is None:
            M = self.M
            interno = self.oraculo_livre()

            def lado(v):
                if v in M:
                    return None
                if interno.vertex_matched(v).matched:
                    return DuplicatedBipartiteView.LADO_A
                return DuplicatedBipartiteView.LADO_B

            visao = DuplicatedBipartiteView(self.base, lado, self.cfg.k, self.cfg.kb_inteiro)
            self._b1 = OraculoBMatching(visao, self.ranking('pi_b1'), enumerador=self.enumerador)
        return self._b1

    def oraculo_b2(self) -> OraculoBMatching:
        """b-emparelhamento guloso de G[V(M), V - V(M)]"""
        if self._b2 is None:
            M = self.M

            def lado(v):
                return DuplicatedBipartiteView.LADO_A if v in M else DuplicatedBipartiteView.LADO_B

            visao = DuplicatedBipartiteView(self.base, lado, self.cfg.k, self.cfg.kb_inteiro)
            self._b2 = OraculoBMatching(visao, self.ranking('pi_b2'), enumerador=self.enumerador)
        return self._b2

    def contar(self, oraculo: Oraculo, universo: int, r: int, rng: np.random.Generator) -> int:
        if universo == 0:
            return 0
        return sum(
            1 for x in rng.integers(0, universo, size=r).tolist()
            if oraculo.vertex_matched(x).matched
        )

    def escalar(self, soma: int, universo: int, r: int, deslocar: bool) -> float:
        """universo * soma / 2r, menos universo / (2 ln n) quando deslocar"""
        if universo == 0:
            return 0.0
        valor = universo * soma / (2 * r)
        if deslocar:
            valor -= universo / (2 * log_natural(self.n))
        return valor


class EstimadorService:
    """
    Estimadores sublineares de mu(G)
    """

    # Casos amostrais

    @staticmethod
    def _caso1(ctx: _Execucao, r: int, deslocar: bool = True) -> EstimateSample:
        rng = ctx.rng('amostras_1')
        X = ctx.contar(ctx.oraculo_livre(), ctx.n, r, rng)
        Y = ctx.contar(ctx.oraculo_b1(), ctx.vagas, r, rng)
        return EstimateSample(
            r=r, X=X, Y=Y,
            mu_Mp=ctx.escalar(X, ctx.n, r, deslocar),
            mu_B1=ctx.escalar(Y, ctx.vagas, r, deslocar),
        )

    @staticmethod
    def _caso2(ctx: _Execucao, r: int, deslocar: bool = True) -> Tuple[int, float]:
        Z = ctx.contar(ctx.oraculo_b2(), ctx.vagas, r, ctx.rng('amostras_2'))
        return Z, ctx.escalar(Z, ctx.vagas, r, deslocar)

    @staticmethod
    def _componentes_exatos(ctx: _Execucao) -> Dict[str, Any]:
        """M', B1 e B2 materializados com os mesmos rankings dos oráculos"""
        g: Graph = ctx.base
        M = ctx.M
        livres = [v for v in range(g.n) if v not in M]
        posicao = {v: i for i, v in enumerate(livres)}
        induzido = Graph.from_edges(
            len(livres),
            [(posicao[u], posicao[v]) for u, v in g.edges() if u in posicao and v in posicao],
        )
        Mp_local = ExatoService.gmm(induzido, ctx.ranking('pi_linha'), rotulos=livres)
        Mp = Matching((livres[a], livres[b]) for a, b in Mp_local.edges)

        lados1 = [None if v in M else ('A' if v in Mp else 'B') for v in range(g.n)]
        B1 = ExatoService.maximal_bmatching(g, ctx.cfg.k, ctx.cfg.kb_inteiro, ctx.ranking('pi_b1'), lados1)
        lados2 = ['A' if v in M else 'B' for v in range(g.n)]
        B2 = ExatoService.maximal_bmatching(g, ctx.cfg.k, ctx.cfg.kb_inteiro, ctx.ranking('pi_b2'), lados2)
        return {'M': M, 'Mp': Mp, 'B1': B1, 'B2': B2}

    # Preparação

    @staticmethod
    def _preparar_lista(g: Graph, cfg: EstimatorConfig, seed: int, M: Optional[Matching]) -> _Execucao:
        ctx = _Execucao(g.instrumentado(), g.n, cfg, seed)
        if M is not None:
            for u, v in M.edges:
                if not g.has_edge(u, v):
                    raise ErroValidacaoGrafo(f"Emparelhamento forçado usa aresta inexistente ({u}, {v})")
            ctx.M = M
        else:
            config = SparsifierConfig(c=cfg.c) if cfg.c else SparsifierConfig.padrao(g.n)
            ctx.M, _ = EsparsificacaoService.sparsify(ctx.base, config, ctx.sementes['esparsificacao'])
        return ctx

    @staticmethod
    def _limitar(valor: float, n: int) -> float:
        return min(max(valor, 0.0), n / 2)

    @staticmethod
    def _relatorio(ctx: _Execucao, mu1: float, mu2: float, tamanho_m: int,
                   amostra: Optional[EstimateSample], estimativa: Optional[float] = None,
                   **detalhes) -> EstimateReport:
        estimativa = max(mu1, mu2) if estimativa is None else estimativa
        relatorio = EstimateReport(
            estimate=estimativa,
            mu1=mu1,
            mu2=mu2,
            M_size=tamanho_m,
            probes=ctx.base.stats.snapshot(),
            mode=ctx.cfg.mode,
            seed=ctx.seed,
            config=ctx.cfg.to_dict(),
            sample=asdict(amostra) if amostra is not None else None,
            detalhes=detalhes,
        )
        logger.info(
            f"Estimativa {ctx.cfg.mode}: n={ctx.n} |M|={tamanho_m} mu1={mu1:.3f} mu2={mu2:.3f} "
            f"estimativa={estimativa:.3f} sondagens={ctx.base.stats.total}"
        )
        return relatorio

    # Operações públicas

    @staticmethod
    def case1_sample(g: Graph, M: Matching, cfg: EstimatorConfig, seed: int) -> Tuple[float, float]:
        """
        (mu_M', mu_B1) do primeiro caso

        Amostral: X sobre r vértices uniformes (emparelhado em M') e Y sobre
        r vértices virtuais uniformes (emparelhado no b-emparelhamento de G1),
        com deslocamentos aditivos. Em exact_reference devolve |M'| e |B1|.
        """
        ctx = EstimadorService._preparar_lista(g, cfg, seed, M)
        if cfg.exact_reference:
            exatos = EstimadorService._componentes_exatos(ctx)
            return float(len(exatos['Mp'])), float(len(exatos['B1']))
        amostra = EstimadorService._caso1(ctx, cfg.amostras(g.n))
        return amostra.mu_Mp, amostra.mu_B1

    @staticmethod
    def case2_sample(g: Graph, M: Matching, cfg: EstimatorConfig, seed: int) -> float:
        """mu_B2 = n Z / 2r - n / (2 ln n); em exact_reference, |B2|"""
        ctx = EstimadorService._preparar_lista(g, cfg, seed, M)
        if cfg.exact_reference:
            return float(len(EstimadorService._componentes_exatos(ctx)['B2']))
        _, mu_b2 = EstimadorService._caso2(ctx, cfg.amostras(g.n))
        return mu_b2

    @staticmethod
    def componentes_exatos(g: Graph, cfg: EstimatorConfig, seed: int,
                           M: Optional[Matching] = None) -> Dict[str, Any]:
        """M, M', B1 e B2 exatamente como o modo exact_reference os calcula"""
        ctx = EstimadorService._preparar_lista(g, cfg, seed, M)
        return EstimadorService._componentes_exatos(ctx)

    @staticmethod
    def estimate_bipartite(g: Graph, cfg: EstimatorConfig, seed: int,
                           M: Optional[Matching] = None) -> EstimateReport:
        """
        max(mu1, mu2) para grafos bipartidos

        mu1 = |M| + (1 - 1/b) mu_M' + mu_B1 / kb
        mu2 = (1 - 1/b) |M| + mu_B2 / kb

        Args:
            g: grafo bipartido
            cfg: EstimatorConfig
            seed: semente do run
            M: emparelhamento inicial forçado (substitui a esparsificação)

        Raises:
            ErroGrafoNaoBipartido: detectado no modo exact_reference
        """
        ctx = EstimadorService._preparar_lista(g, cfg, seed, M)
        return EstimadorService._bipartido(ctx, cfg.amostras(g.n), deslocar=True)

    @staticmethod
    def _bipartido(ctx: _Execucao, r: int, deslocar: bool, **detalhes) -> EstimateReport:
        cfg = ctx.cfg
        b = cfg.b
        M = ctx.M
        amostra = None
        if cfg.exact_reference:
            if ExatoService.colorir_bipartido(ctx.base) is None:
                raise ErroGrafoNaoBipartido("Estimador bipartido recebeu grafo com ciclo ímpar")
            exatos = EstimadorService._componentes_exatos(ctx)
            mu_mp, mu_b1, mu_b2 = len(exatos['Mp']), len(exatos['B1']), len(exatos['B2'])
        else:
            amostra = EstimadorService._caso1(ctx, r, deslocar)
            amostra.Z, amostra.mu_B2 = EstimadorService._caso2(ctx, r, deslocar)
            mu_mp, mu_b1, mu_b2 = amostra.mu_Mp, amostra.mu_B1, amostra.mu_B2

        mu1 = len(M) + (1 - 1 / b) * max(mu_mp, 0.0) + max(mu_b1, 0.0) / cfg.kb
        mu2 = (1 - 1 / b) * len(M) + max(mu_b2, 0.0) / cfg.kb
        if deslocar or cfg.exact_reference:
            mu1 = EstimadorService._limitar(mu1, ctx.n)
            mu2 = EstimadorService._limitar(mu2, ctx.n)
        return EstimadorService._relatorio(ctx, mu1, mu2, len(M), amostra, r=r, **detalhes)

    @staticmethod
    def estimate_general(g: Graph, cfg: EstimatorConfig, seed: int,
                         M: Optional[Matching] = None) -> EstimateReport:
        """
        Variante para grafos gerais

        mu1 = |M| + mu(H1) com H1 = M' u B1; mu2 = mu(H2) com H2 = M u B2.
        mu(H) é estimado pelo LCA sobre camadas dos oráculos, ou calculado
        exatamente sobre H materializado em exact_reference.
        """
        ctx = EstimadorService._preparar_lista(g, cfg, seed, M)
        M = ctx.M
        r = cfg.amostras(g.n)

        if cfg.exact_reference:
            exatos = EstimadorService._componentes_exatos(ctx)
            h1 = Graph.from_edges(g.n, sorted(exatos['Mp'].edges | exatos['B1'].support()))
            h2 = Graph.from_edges(g.n, sorted(M.edges | exatos['B2'].support()))
            mu_h1 = len(ExatoService.exact_max_matching(h1))
            mu_h2 = len(ExatoService.exact_max_matching(h2))
            truncamentos = 0
        else:
            grau_h = 1 + cfg.largura
            lca_cfg = LcaConfig.padrao(grau_h, cfg.lca_eps)
            semente_lca = semente64(ctx.sementes['lca'])
            h1 = UnionSubgraphOracle(g.n, [
                UnionSubgraphOracle.camada_oraculo(ctx.oraculo_livre()),
                UnionSubgraphOracle.camada_copias(ctx.oraculo_b1()),
            ], grau_h)
            h2 = UnionSubgraphOracle(g.n, [
                UnionSubgraphOracle.camada_emparelhamento(M),
                UnionSubgraphOracle.camada_copias(ctx.oraculo_b2()),
            ], grau_h)
            estimativa_h1 = LcaService.estimate_mu_union_detalhado(h1, lca_cfg, semente_lca, r)
            estimativa_h2 = LcaService.estimate_mu_union_detalhado(h2, lca_cfg, semente_lca + 1, r)
            mu_h1, mu_h2 = estimativa_h1.mu, estimativa_h2.mu
            truncamentos = estimativa_h1.truncamentos + estimativa_h2.truncamentos
            if truncamentos:
                registrar_log(
                    'emparelhamento.estimador',
                    f"Modo general com {truncamentos} consultas LCA truncadas (raio {lca_cfg.raio}); "
                    f"mu(H) dessas consultas vem do guloso, sem a garantia 1 - eps",
                    nivel='WARNING',
                )

        mu1 = EstimadorService._limitar(len(M) + mu_h1, g.n)
        mu2 = EstimadorService._limitar(mu_h2, g.n)
        return EstimadorService._relatorio(
            ctx, mu1, mu2, len(M), None, r=r, mu_h1=mu_h1, mu_h2=mu_h2, truncamentos=truncamentos,
        )

    @staticmethod
    def estimate_multiplicative(g: Graph, cfg: EstimatorConfig, seed: int,
                                M: Optional[Matching] = None) -> EstimateReport:
        """
        Garantia multiplicativa: r = ceil(a (grau_max / grau_medio) 6 ln^3 n / eps^2), sem deslocamentos

        Graus de todos os vértices por busca binária (O(n log n) sondagens).
        Grafo sem arestas devolve 0.
        """
        ctx = EstimadorService._preparar_lista(g, cfg, seed, M)
        graus = [ctx.enumerador.grau(v) for v in range(g.n)]
        soma = sum(graus)
        if soma == 0:
            return EstimadorService._relatorio(ctx, 0.0, 0.0, len(ctx.M), None, r=0)

        grau_max = max(graus)
        grau_medio = soma / g.n
        r = cfg.r or max(1, math.ceil(
            cfg.fator_amostras * (grau_max / grau_medio) * 6 * log_natural(g.n) ** 3 / cfg.eps ** 2
        ))
        return EstimadorService._bipartido(
            ctx, r, deslocar=False, grau_maximo=grau_max, grau_medio=grau_medio,
        )

    @staticmethod
    def contar_escapes(visao: MatrixToListView, M: Matching) -> int:
        """Vértices de V2 emparelhados fora do seu conjunto U"""
        limite = 2 * visao.n
        escapes = 0
        for v in range(visao.n, limite):
            parceiro = M.partner(v)
            if parceiro is not None and parceiro < limite:
                escapes += 1
        return escapes

    @staticmethod
    def estimate_matrix(g: Graph, cfg: EstimatorConfig, seed: int) -> EstimateReport:
        """
        Modo matriz: estimador de lista sobre H = MatrixToListView(G)

        A esparsificação processa V2 antes de V1, com c dimensionado por n e
        não pelo tamanho de H; arestas de M entre V2 e os conjuntos U não
        entram em |M|; amostras apenas em V1; a estimativa final perde n / ln n
        e é limitada a [0, n/2]. Em exact_reference os oráculos são avaliados
        em todo V1, sem amostragem nem deslocamentos.
        """
        g_run = g.instrumentado()
        visao = MatrixToListView(g_run)
        n = g.n
        ctx = _Execucao(visao, n, cfg, seed)
        ordem = list(range(n, 2 * n)) + list(range(n))
        config = (SparsifierConfig(c=cfg.c, vertex_order=ordem) if cfg.c
                  else SparsifierConfig.padrao(n, ordem))
        ctx.M, _ = EsparsificacaoService.sparsify(visao, config, ctx.sementes['esparsificacao'])
        M = ctx.M

        limite_v2 = 2 * n
        arestas_u = sum(1 for u, v in M.edges if n <= u < limite_v2 <= v)
        tamanho_m = len(M) - arestas_u
        escapes = EstimadorService.contar_escapes(visao, M)

        b = cfg.b
        amostra = None
        r = cfg.amostras(n)
        if cfg.exact_reference:
            mu_mp = sum(1 for v in range(n) if ctx.oraculo_livre().vertex_matched(v).matched) / 2
            mu_b1 = sum(ctx.oraculo_b1().carga(v) for v in range(n)) / 2
            mu_b2 = sum(ctx.oraculo_b2().carga(v) for v in range(n)) / 2
        else:
            amostra = EstimadorService._caso1(ctx, r)
            amostra.Z, amostra.mu_B2 = EstimadorService._caso2(ctx, r)
            mu_mp, mu_b1, mu_b2 = amostra.mu_Mp, amostra.mu_B1, amostra.mu_B2

        mu1 = tamanho_m + (1 - 1 / b) * max(mu_mp, 0.0) + max(mu_b1, 0.0) / cfg.kb
        mu2 = (1 - 1 / b) * tamanho_m + max(mu_b2, 0.0) / cfg.kb
        estimativa = EstimadorService._limitar(max(mu1, mu2) - n / log_natural(n), n)
        return EstimadorService._relatorio(
            ctx, mu1, mu2, tamanho_m, amostra, estimativa=estimativa,
            r=r, escapes_v2=escapes, arestas_v2_u=arestas_u,
        )

    @staticmethod
    def estimar(g: Graph, cfg: EstimatorConfig, seed: int, M: Optional[Matching] = None) -> EstimateReport:
        """
        Despacha pelo modo da configuração

        Colisão de ranking reinicia o run com semente derivada, até
        TENTATIVAS_COLISAO vezes.
        """
        executores = {
            MODO_BIPARTIDO: EstimadorService.estimate_bipartite,
            MODO_GERAL: EstimadorService.estimate_general,
            MODO_MULTIPLICATIVO: EstimadorService.estimate_multiplicative,
        }
        semente = seed
        ultima = None
        for tentativa in range(TENTATIVAS_COLISAO):
            try:
                if cfg.mode == MODO_MATRIZ:
                    if M is not None:
                        raise ErroValidacaoGrafo("Modo matriz não aceita emparelhamento forçado")
                    return EstimadorService.estimate_matrix(g, cfg, semente)
                return executores[cfg.mode](g, cfg, semente, M)
            except ErroRankingDuplicado as e:
                logger.warning(f"Colisão de ranking na tentativa {tentativa + 1}: {e}")
                ultima = e
                semente = splitmix64(semente) >> 1
        raise ultima

    @staticmethod
    def run_parallel_instances(g: Graph, cfg: EstimatorConfig, seed: int, count: int,
                               M: Optional[Matching] = None) -> EstimateReport:
        """
        Executa count instâncias independentes e devolve a primeira que termina

        Sementes: SeedSequence(seed).spawn(count). Com CELERY_TASK_ALWAYS_EAGER
        (ou count = 1) as instâncias rodam em sequência e vale o primeiro sucesso;
        caso contrário cada uma vira uma task e as demais são revogadas.

        Raises:
            ErroInstancias: todas as instâncias falharam
        """
        if count < 1:
            raise ErroValidacaoGrafo(f"count deve ser >= 1: {count}")
        sementes = [semente64(s) >> 1 for s in np.random.SeedSequence(seed).spawn(count)]

        if count == 1 or getattr(settings, 'CELERY_TASK_ALWAYS_EAGER', True) or M is not None:
            causas: List[Exception] = []
            for semente in sementes:
                try:
                    return EstimadorService.estimar(g, cfg, semente, M)
                except (ErroExaustaoAmostragem, ErroRankingDuplicado) as e:
                    logger.warning(f"Instância seed={semente} falhou: {e}")
                    causas.append(e)
            raise ErroInstancias(causas)

        return EstimadorService._despachar_instancias(g, cfg, sementes)

    @staticmethod
    def _despachar_instancias(g: Graph, cfg: EstimatorConfig, sementes: List[int]) -> EstimateReport:
        from .tasks import executar_instancia

        texto = GrafoService.dump_graph(g)
        pendentes = [executar_instancia.delay(texto, cfg.to_dict(), semente) for semente in sementes]
        causas: List[Any] = []
        while pendentes:
            for resultado in list(pendentes):
                if not resultado.ready():
                    continue
                pendentes.remove(resultado)
                if resultado.successful():
                    for restante in pendentes:
                        restante.revoke(terminate=True)
                    return EstimateReport.from_dict(resultado.result)
                causas.append(resultado.result)
            time.sleep(INTERVALO_POLLING)
        raise ErroInstancias(causas)
