"""
Algoritmo de computação local (LCA) para emparelhamento em subgrafos de grau limitado
H é apresentado apenas por camadas que devolvem as arestas incidentes a um vértice
"""
import math
from collections import Counter, deque
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, List, Optional, Sequence

import numpy as np
from django.conf import settings

from comum.utilitarios.logs import registrar_log

from .excecoes import ErroValidacaoGrafo
from .services_exato import ExatoService, Matching
from .services_grafo import Graph, OracleStats
from .services_rgmm import OraculoBMatching, OraculoRGMM, RankFunction
from .services_visoes import VisaoGrafo

Camada = Callable[[int], Iterable[int]]


class UnionSubgraphOracle:
    """
    H como união de camadas de arestas

    Cada camada recebe um vértice e devolve os parceiros dele naquela camada
    (emparelhamento explícito, oráculo RGMM ou b-emparelhamento por cópias).
    Arestas repetidas entre camadas colapsam em uma só.

    Args:
        universo: vértices de H são [0, universo)
        camadas: provedores de arestas incidentes
        grau_maximo: limite de grau de H
    """

    def __init__(self, universo: int, camadas: Sequence[Camada], grau_maximo: int):
        self.universo = universo
        self.camadas = list(camadas)
        self.grau_maximo = max(int(grau_maximo), 1)
        self.chamadas: Counter = Counter()
        self._vizinhos: Dict[int, List[int]] = {}

    def vizinhos(self, v: int) -> List[int]:
        lista = self._vizinhos.get(v)
        if lista is not None:
            return lista
        self.chamadas[v] += 1
        unicos = set()
        for camada in self.camadas:
            unicos.update(u for u in camada(v) if u != v)
        lista = sorted(unicos)
        if len(lista) > self.grau_maximo:
            raise ErroValidacaoGrafo(
                f"Grau {len(lista)} do vértice {v} excede o limite de H ({self.grau_maximo})"
            )
        self._vizinhos[v] = lista
        return lista

    def materializar(self) -> Graph:
        arestas = set()
        for v in range(self.universo):
            for u in self.vizinhos(v):
                arestas.add((min(u, v), max(u, v)))
        return Graph.from_edges(self.universo, sorted(arestas))

    # camadas usuais

    @staticmethod
    def camada_emparelhamento(M: Matching) -> Camada:
        def camada(v):
            parceiro = M.partner(v)
            return () if parceiro is None else (parceiro,)
        return camada

    @staticmethod
    def camada_oraculo(oraculo: OraculoRGMM) -> Camada:
        """Arestas de GMM de uma visão cujos ids coincidem com os vértices base"""
        def camada(v):
            resposta = oraculo.vertex_matched(v)
            return (resposta.partner,) if resposta.matched else ()
        return camada

    @staticmethod
    def camada_copias(oraculo: OraculoBMatching) -> Camada:
        """Suporte nos vértices base do b-emparelhamento de uma DuplicatedBipartiteView"""
        return oraculo.suporte


class VisaoUniao:
    """Oráculo de lista sobre H para o oráculo RGMM de contingência"""

    def __init__(self, h: UnionSubgraphOracle):
        self.h = h
        self.stats = OracleStats()

    @property
    def universo(self) -> int:
        return self.h.universo

    def validar_vertice(self, v: int):
        if not 0 <= v < self.h.universo:
            raise ErroValidacaoGrafo(f"Vértice inválido em H: {v}")

    def grau_maximo(self, v: int) -> int:
        return self.h.grau_maximo

    def list_probe(self, v: int, i: int) -> Optional[int]:
        self.stats.registrar_list_probe(v)
        vizinhos = self.h.vizinhos(v)
        return vizinhos[i] if i < len(vizinhos) else None


@dataclass
class LcaConfig:
    """
    eps: precisão; raio: máximo de vértices explorados por componente
    """
    eps: float
    raio: int

    def __post_init__(self):
        if not 0 < self.eps < 1:
            raise ErroValidacaoGrafo(f"eps do LCA deve estar em (0, 1): {self.eps}")
        if self.raio < 1:
            raise ErroValidacaoGrafo(f"raio do LCA deve ser >= 1: {self.raio}")

    @classmethod
    def padrao(cls, grau_h: int, eps: Optional[float] = None) -> 'LcaConfig':
        """raio = min(grau_h ^ ceil(1/eps^2), LCA_RAIO_MAXIMO)"""
        config = settings.EMPARELHAMENTO
        eps = eps if eps is not None else config.get('LCA_EPSILON', 0.05)
        teto = int(config.get('LCA_RAIO_MAXIMO', 20000))
        expoente = math.ceil(1 / eps ** 2)
        base = max(int(grau_h), 2)
        # evita a potência gigante: basta saber se passa do teto
        raio = teto if expoente * math.log(base) >= math.log(teto) else base ** expoente
        return cls(eps=eps, raio=max(int(raio), 1))


@dataclass(frozen=True)
class EstimativaUniao:
    """mu: estimativa de mu(H); truncamentos: consultas resolvidas fora do raio"""
    mu: float
    truncamentos: int


class MatchingLocal:
    """
    Emparelhamento implícito de H consultável vértice a vértice

    Componente com até cfg.raio vértices: resolvido exatamente (Edmonds a
    partir do guloso por ranking) e memoizado por inteiro. Componente maior:
    oráculo RGMM sobre H, com contador de truncamento. O tamanho é propriedade
    do componente, então todos os seus vértices seguem o mesmo caminho e as
    respostas independem da ordem das consultas.
    """

    def __init__(self, h: UnionSubgraphOracle, cfg: LcaConfig, seed: int):
        self.h = h
        self.cfg = cfg
        self.seed = int(seed)
        self.ranking = RankFunction(self.seed)
        self.truncamentos = 0
        self._parceiros: Dict[int, Optional[int]] = {}
        self._contingencia: Optional[OraculoRGMM] = None

    def _componente(self, v: int) -> Optional[List[int]]:
        vistos = {v}
        fila = deque([v])
        while fila:
            u = fila.popleft()
            for w in self.h.vizinhos(u):
                if w not in vistos:
                    vistos.add(w)
                    if len(vistos) > self.cfg.raio:
                        return None
                    fila.append(w)
        return sorted(vistos)

    def _resolver_componente(self, vertices: List[int]):
        local = {v: i for i, v in enumerate(vertices)}
        arestas = [
            (local[u], local[w])
            for u in vertices for w in self.h.vizinhos(u) if u < w
        ]
        sub = Graph.from_edges(len(vertices), arestas)
        guloso = ExatoService.gmm(sub, self.ranking, rotulos=vertices)
        maximo = ExatoService.exact_max_matching(sub, inicial=guloso)
        for i, v in enumerate(vertices):
            parceiro = maximo.partner(i)
            self._parceiros[v] = None if parceiro is None else vertices[parceiro]

    def _oraculo_contingencia(self) -> OraculoRGMM:
        if self._contingencia is None:
            visao = VisaoGrafo(VisaoUniao(self.h))
            self._contingencia = OraculoRGMM(visao, self.ranking, rng=np.random.default_rng(self.seed))
        return self._contingencia

    def parceiro(self, v: int) -> Optional[int]:
        if v in self._parceiros:
            return self._parceiros[v]
        vertices = self._componente(v)
        if vertices is not None:
            self._resolver_componente(vertices)
            return self._parceiros[v]

        self.truncamentos += 1
        resposta = self._oraculo_contingencia().vertex_matched(v)
        self._parceiros[v] = resposta.partner
        return resposta.partner

    def vertex_matched(self, v: int) -> bool:
        return self.parceiro(v) is not None


class LcaService:
    """
    Consultas LCA e estimativa de mu(H)
    """

    @staticmethod
    def lca_vertex_matched(h: UnionSubgraphOracle, cfg: LcaConfig, seed: int, v: int) -> bool:
        """Consulta isolada; respostas são consistentes entre instâncias com o mesmo seed"""
        return MatchingLocal(h, cfg, seed).vertex_matched(v)

    @staticmethod
    def estimate_mu_union(h: UnionSubgraphOracle, cfg: LcaConfig, seed: int, r: int,
                          exato: bool = False) -> float:
        """
        Estimativa de mu(H)

        Amostral: (n'/2r) * soma dos indicadores em r vértices uniformes,
        menos n'/(2 ln n'), limitada abaixo por 0. Exato: mu(H) materializado.

        Args:
            h: H por camadas
            cfg: LcaConfig
            seed: semente do LCA e da amostragem
            r: número de amostras (>= 1)
            exato: materializa H e devolve mu(H)
        """
        return LcaService.estimate_mu_union_detalhado(h, cfg, seed, r, exato).mu

    @staticmethod
    def estimate_mu_union_detalhado(h: UnionSubgraphOracle, cfg: LcaConfig, seed: int, r: int,
                                    exato: bool = False) -> EstimativaUniao:
        """Como estimate_mu_union, com o número de consultas que caíram no guloso de contingência"""
        if exato:
            return EstimativaUniao(float(len(ExatoService.exact_max_matching(h.materializar()))), 0)
        if r < 1:
            raise ErroValidacaoGrafo(f"r deve ser >= 1: {r}")

        n_linha = h.universo
        if n_linha == 0:
            return EstimativaUniao(0.0, 0)
        lca = MatchingLocal(h, cfg, seed)
        rng = np.random.default_rng(seed)
        soma = sum(1 for v in rng.integers(0, n_linha, size=r).tolist() if lca.vertex_matched(v))

        if lca.truncamentos:
            registrar_log(
                'emparelhamento.lca',
                f"{lca.truncamentos} consultas em componentes acima do raio {cfg.raio}; usado guloso local",
                nivel='WARNING',
            )
        estimativa = n_linha * soma / (2 * r) - n_linha / (2 * math.log(max(n_linha, 2)))
        return EstimativaUniao(max(estimativa, 0.0), lca.truncamentos)
