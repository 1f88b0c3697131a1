"""
Esparsificação: emparelhamento inicial M por amostragem de c vizinhos por vértice
Após o laço, G[V - V(M)] tem grau máximo <= sqrt(n) com alta probabilidade
"""
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from comum.utilitarios.logs import registrar_log

from .excecoes import ErroValidacaoGrafo
from .services_exato import Matching
from .services_grafo import Graph, GrafoService, OracleStats


@dataclass
class SparsifierConfig:
    """
    c: amostras por vértice; vertex_order: ordem de processamento (default 0..n-1)
    """
    c: int
    vertex_order: Optional[Sequence[int]] = None

    def __post_init__(self):
        if self.c < 1:
            raise ErroValidacaoGrafo(f"Orçamento de amostras deve ser >= 1: c={self.c}")

    @classmethod
    def padrao(cls, n: int, vertex_order: Optional[Sequence[int]] = None) -> 'SparsifierConfig':
        """c = ceil(2 * sqrt(n) * ln n)"""
        c = math.ceil(2 * math.sqrt(n) * math.log(n)) if n > 1 else 1
        return cls(c=max(c, 1), vertex_order=vertex_order)


class EsparsificacaoService:

    @staticmethod
    def sparsify(oraculo, cfg: SparsifierConfig, seed) -> Tuple[Matching, OracleStats]:
        """
        Constrói M processando cada vértice livre na ordem configurada

        Vértice livre com grau > 0 sorteia até c índices uniformes (com
        reposição) da sua lista e se emparelha com o primeiro vizinho livre.
        Grau obtido por busca binária; vértices isolados não consomem amostras.

        Args:
            oraculo: oráculo de lista (Graph ou MatrixToListView)
            cfg: SparsifierConfig
            seed: semente ou SeedSequence do gerador numpy

        Returns:
            (M, stats do oráculo)
        """
        rng = np.random.default_rng(seed)
        emparelhamento = Matching()
        ordem = cfg.vertex_order if cfg.vertex_order is not None else range(oraculo.universo)
        antes = oraculo.stats.list_probes_total

        for v in ordem:
            if v in emparelhamento:
                continue
            grau = GrafoService.degree_via_binary_search(oraculo, v)
            if grau == 0:
                continue
            for i in rng.integers(0, grau, size=cfg.c).tolist():
                u = oraculo.list_probe(v, i)
                if u not in emparelhamento:
                    emparelhamento.add(v, u)
                    break

        registrar_log(
            'emparelhamento.esparsificacao',
            f"|M|={len(emparelhamento)} c={cfg.c} sondagens={oraculo.stats.list_probes_total - antes}",
            nivel='DEBUG',
        )
        return emparelhamento, oraculo.stats

    @staticmethod
    def residual_degree_check(g: Graph, M: Matching) -> int:
        """Grau máximo de G[V - V(M)] por varredura completa (utilitário de teste)"""
        maior = 0
        for v in range(g.n):
            if v in M:
                continue
            grau = sum(1 for u in g.adjacency[v] if u not in M)
            maior = max(maior, grau)
        return maior
