"""
Oráculo local do emparelhamento maximal guloso aleatório (RGMM)

Responde "v está emparelhado?" sem construir o emparelhamento: a aresta e
pertence ao guloso sse nenhuma aresta adjacente de rank menor pertence.
O b-emparelhamento guloso das visões duplicadas tem oráculo próprio
(OraculoBMatching), resolvido sobre os vértices base.
"""
import logging
from bisect import bisect_right
from collections import Counter
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .excecoes import ErroRankingDuplicado
from .services_grafo import aresta_canonica
from .services_visoes import DuplicatedBipartiteView, EnumeradorVizinhos

logger = logging.getLogger('emparelhamento.rgmm')

MASCARA_64 = (1 << 64) - 1
_OURO = 0x9E3779B97F4A7C15
_MULT_1 = 0xBF58476D1CE4E5B9
_MULT_2 = 0x94D049BB133111EB


def splitmix64(z: int) -> int:
    z = (z + _OURO) & MASCARA_64
    z = ((z ^ (z >> 30)) * _MULT_1) & MASCARA_64
    z = ((z ^ (z >> 27)) * _MULT_2) & MASCARA_64
    return z ^ (z >> 31)


def _splitmix64_vetor(z: np.ndarray) -> np.ndarray:
    # aritmética uint64 do numpy é módulo 2^64, igual à versão escalar
    with np.errstate(over='ignore'):
        z = z + np.uint64(_OURO)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(_MULT_1)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(_MULT_2)
        return z ^ (z >> np.uint64(31))


class RankFunction:
    """
    Permutação aleatória das arestas realizada preguiçosamente por hash

    chave(u, v) = splitmix64(splitmix64(seed ^ min) + max), inteiro de 64 bits;
    rank(u, v) é a chave normalizada em (0, 1). A ordem das arestas é a ordem
    das chaves. Colisões são detectadas por quem ordena (ErroRankingDuplicado).
    """

    def __init__(self, seed: int):
        self.seed = int(seed) & MASCARA_64
        self._explicita: Optional[Dict[Tuple[int, int], int]] = None

    @classmethod
    def explicito(cls, ordem: Sequence[Tuple[int, int]], seed: int = 0) -> 'RankFunction':
        """
        Ranks dados por uma ordem explícita de arestas

        Arestas fora da ordem ficam depois de todas as listadas, em ordem de hash.
        """
        ranking = cls(seed)
        ranking._explicita = {aresta_canonica(u, v): i for i, (u, v) in enumerate(ordem)}
        return ranking

    def reseed(self) -> 'RankFunction':
        """Nova função independente, usada após uma colisão detectada"""
        return RankFunction(splitmix64(self.seed + 1))

    def _hash(self, a: int, b: int) -> int:
        return splitmix64((splitmix64(self.seed ^ a) + b) & MASCARA_64)

    def chave(self, u: int, v: int) -> int:
        a, b = aresta_canonica(u, v)
        if self._explicita is None:
            return self._hash(a, b)
        posicao = self._explicita.get((a, b))
        if posicao is not None:
            return posicao
        return len(self._explicita) + self._hash(a, b)

    def chaves(self, x: int, vizinhos: np.ndarray) -> np.ndarray:
        """
        Chaves das arestas (x, y) para todo y em vizinhos

        Returns:
            np.ndarray uint64 (modo hash) ou de objetos int (modo explícito)
        """
        if self._explicita is not None:
            return np.array([self.chave(x, int(y)) for y in vizinhos], dtype=object)
        vizinhos = np.asarray(vizinhos, dtype=np.int64)
        menor = np.minimum(vizinhos, x).astype(np.uint64)
        maior = np.maximum(vizinhos, x).astype(np.uint64)
        with np.errstate(over='ignore'):
            return _splitmix64_vetor(_splitmix64_vetor(np.uint64(self.seed) ^ menor) + maior)

    def rank(self, u: int, v: int) -> float:
        escala = float(1 << 64)
        if self._explicita is not None:
            escala += len(self._explicita)
        return (self.chave(u, v) + 0.5) / (escala + 1.0)


@dataclass(frozen=True)
class OracleAnswer:
    matched: bool
    partner: Optional[int]
    probes_used: int


class _Quadro:
    """Aresta pendente na pilha de resolução, com cursores nas listas das pontas"""

    __slots__ = ('aresta', 'chave', 'a', 'ka', 'ca', 'b', 'kb', 'cb', 'ia', 'ib', 'lado', 'visto')

    def __init__(self, a, ka, ca, b, kb, cb, chave):
        self.aresta = aresta_canonica(a, b)
        self.chave = chave
        self.a, self.ka, self.ca = a, ka, ca
        self.b, self.kb, self.cb = b, kb, cb
        self.ia = 0
        self.ib = 0
        self.lado = 0
        self.visto = None


class OraculoRGMM:
    """
    Oráculo local de GMM(visão, ranking)

    A visão deve usar os próprios vértices base como ids (VisaoGrafo,
    InducedSubgraphView); as listas ordenadas ficam em cache por vértice.

    Escopo de memoização: uma instância por run do estimador. Dentro do
    escopo, respostas são consistentes e independentes da ordem das consultas.

    Args:
        visao: VisaoGrafo ou InducedSubgraphView
        ranking: RankFunction que fixa a permutação
        rng: gerador para a enumeração de vizinhos (default: derivado do seed do ranking)
        enumerador: cache de vizinhos compartilhável entre oráculos sobre o mesmo oráculo base
    """

    def __init__(self, visao, ranking: RankFunction, rng: Optional[np.random.Generator] = None,
                 enumerador: Optional[EnumeradorVizinhos] = None):
        if isinstance(visao, DuplicatedBipartiteView):
            raise TypeError("Visões duplicadas usam OraculoBMatching")
        self.visao = visao
        self.ranking = ranking
        if enumerador is None:
            enumerador = EnumeradorVizinhos(visao.base, rng or np.random.default_rng(ranking.seed))
        self.enumerador = enumerador
        self._listas: Dict[int, Tuple[np.ndarray, np.ndarray]] = {}
        self._memo: Dict[Tuple[int, int], bool] = {}
        self._parceiros: Dict[int, Optional[int]] = {}

    @property
    def stats(self):
        return self.visao.stats

    def vertex_matched(self, x: int) -> OracleAnswer:
        antes = self.stats.total
        parceiro = self._parceiro(x)
        return OracleAnswer(parceiro is not None, parceiro, self.stats.total - antes)

    def matched_edge(self, x: int) -> Optional[Tuple[int, int]]:
        parceiro = self._parceiro(x)
        return None if parceiro is None else aresta_canonica(x, parceiro)

    # Resolução

    def _lista(self, x: int) -> Tuple[np.ndarray, np.ndarray]:
        lista = self._listas.get(x)
        if lista is not None:
            return lista

        candidatos = np.asarray(self.enumerador.vizinhos(x), dtype=np.int64)
        chaves = self.ranking.chaves(x, candidatos)
        ordem = np.argsort(chaves, kind='stable')
        chaves = chaves[ordem]
        candidatos = candidatos[ordem]
        if len(chaves) > 1:
            iguais = np.flatnonzero(chaves[1:] == chaves[:-1])
            if iguais.size:
                i = int(iguais[0])
                raise ErroRankingDuplicado((x, int(candidatos[i])), (x, int(candidatos[i + 1])))

        lista = (chaves, candidatos)
        self._listas[x] = lista
        return lista

    def _visitar(self, x: int, y: int):
        self.stats.registrar_visita(self.visao.vertice_base(x))
        self.stats.registrar_visita(self.visao.vertice_base(y))

    def _parceiro(self, x: int) -> Optional[int]:
        if x in self._parceiros:
            return self._parceiros[x]

        parceiro = None
        if self.visao.pertence(x):
            chaves, candidatos = self._lista(x)
            for i in range(len(candidatos)):
                y = int(candidatos[i])
                if not self.visao.adjacente(x, y):
                    continue
                self._visitar(x, y)
                if self._resolver(x, y, chaves[i]):
                    parceiro = y
                    break

        self._parceiros[x] = parceiro
        if parceiro is not None:
            self._parceiros[parceiro] = x
        return parceiro

    def _novo_quadro(self, a: int, b: int, chave) -> _Quadro:
        ka, ca = self._lista(a)
        kb, cb = self._lista(b)
        return _Quadro(a, ka, ca, b, kb, cb, chave)

    def _proximo(self, q: _Quadro):
        """Próxima aresta adjacente de rank menor, sem consumi-la"""
        while True:
            tem_a = q.ia < len(q.ka) and q.ka[q.ia] < q.chave
            tem_b = q.ib < len(q.kb) and q.kb[q.ib] < q.chave
            if not tem_a and not tem_b:
                return None
            if tem_a and (not tem_b or q.ka[q.ia] < q.kb[q.ib]):
                q.lado, posicao = 0, q.ia
                x, y, chave = q.a, int(q.ca[q.ia]), q.ka[q.ia]
            else:
                q.lado, posicao = 1, q.ib
                x, y, chave = q.b, int(q.cb[q.ib]), q.kb[q.ib]

            if not self.visao.adjacente(x, y):
                self._avancar(q)
                continue
            if q.visto != (q.lado, posicao):
                q.visto = (q.lado, posicao)
                self._visitar(x, y)
            return x, y, chave

    @staticmethod
    def _avancar(q: _Quadro):
        if q.lado == 0:
            q.ia += 1
        else:
            q.ib += 1

    def _resolver(self, x: int, y: int, chave) -> bool:
        """
        A aresta (x, y) está no guloso?

        Pilha explícita: cada quadro varre as arestas adjacentes de rank menor
        em ordem crescente; uma filha verdadeira derruba o quadro, filhas falsas
        são puladas e o esgotamento confirma a aresta.
        """
        aresta = aresta_canonica(x, y)
        resolvida = self._memo.get(aresta)
        if resolvida is not None:
            return resolvida

        pilha = [self._novo_quadro(x, y, chave)]
        while pilha:
            q = pilha[-1]
            proximo = self._proximo(q)
            if proximo is None:
                self._memo[q.aresta] = True
                pilha.pop()
                continue

            u, w, chave_filha = proximo
            resultado = self._memo.get(aresta_canonica(u, w))
            if resultado is None:
                pilha.append(self._novo_quadro(u, w, chave_filha))
            elif resultado:
                self._memo[q.aresta] = False
                pilha.pop()
            else:
                self._avancar(q)

        return self._memo[aresta]


class _Incidencia:
    """Lista de um vértice base em ordem de chave e cargas acumuladas até o cursor"""

    __slots__ = ('vizinhos', 'posicao', 'capacidade', 'prefixo')

    def __init__(self, vizinhos: List[int], capacidade: int):
        self.vizinhos = vizinhos
        self.posicao = {w: i for i, w in enumerate(vizinhos)}
        self.capacidade = capacidade
        # prefixo[i] = carga antes da aresta i; o cursor é len(prefixo) - 1
        self.prefixo = [0]

    @property
    def cursor(self) -> int:
        return len(self.prefixo) - 1

    @property
    def saturado(self) -> bool:
        return self.prefixo[-1] >= self.capacidade

    def carga_antes(self, i: int) -> int:
        return self.prefixo[i] if i < len(self.prefixo) else self.prefixo[-1]


class OraculoBMatching:
    """
    Oráculo local do b-emparelhamento maximal guloso sobre uma DuplicatedBipartiteView

    As cópias de uma aresta base compartilham a chave dela. Em ordem de chave,
    cada aresta entre A e B recebe multiplicidade igual ao menor resíduo das
    pontas, exatamente como ExatoService.maximal_bmatching. No grafo duplicado
    isso é o GMM com as cópias ordenadas por (chave, j, j'): as cópias livres
    de v são as últimas, e a cópia j está emparelhada sse j < carga(v).

    Listas, cursores e multiplicidades ficam por vértice e por aresta base,
    então memória e sondagens não dependem de k.

    Args:
        visao: DuplicatedBipartiteView (lados e capacidades)
        ranking: RankFunction sobre as arestas base
        rng: gerador para a enumeração de vizinhos (default: derivado do seed do ranking)
        enumerador: cache de vizinhos compartilhável entre oráculos sobre o mesmo oráculo base
    """

    def __init__(self, visao: DuplicatedBipartiteView, ranking: RankFunction,
                 rng: Optional[np.random.Generator] = None,
                 enumerador: Optional[EnumeradorVizinhos] = None):
        self.visao = visao
        self.ranking = ranking
        if enumerador is None:
            enumerador = EnumeradorVizinhos(visao.base, rng or np.random.default_rng(ranking.seed))
        self.enumerador = enumerador
        self._incidencias: Dict[int, Optional[_Incidencia]] = {}
        self._multiplicidades: Dict[Tuple[int, int], int] = {}

    @property
    def stats(self):
        return self.visao.stats

    def vertex_matched(self, x: int) -> OracleAnswer:
        antes = self.stats.total
        parceiro = self._parceiro(x)
        return OracleAnswer(parceiro is not None, parceiro, self.stats.total - antes)

    def matched_edge(self, x: int) -> Optional[Tuple[int, int]]:
        parceiro = self._parceiro(x)
        return None if parceiro is None else aresta_canonica(x, parceiro)

    def carga(self, v: int) -> int:
        """Número de cópias emparelhadas do vértice base v"""
        incidencia = self._incidencia(v)
        if incidencia is None:
            return 0
        while True:
            pendente = self._avancar(v, incidencia, len(incidencia.vizinhos))
            if pendente is None:
                return incidencia.prefixo[-1]
            self._multiplicidade(*pendente)

    def suporte(self, v: int) -> List[int]:
        """Vizinhos base de v ligados por multiplicidade positiva"""
        if self.carga(v) == 0:
            return []
        incidencia = self._incidencias[v]
        prefixo = incidencia.prefixo
        return [incidencia.vizinhos[i] for i in range(incidencia.cursor) if prefixo[i + 1] > prefixo[i]]

    # Resolução

    def _incidencia(self, v: int) -> Optional[_Incidencia]:
        if v in self._incidencias:
            return self._incidencias[v]

        incidencia = None
        lado = self.visao.lado(v)
        if lado is not None:
            vizinhos = np.asarray(self.enumerador.vizinhos(v), dtype=np.int64)
            chaves = self.ranking.chaves(v, vizinhos)
            ordem = np.argsort(chaves, kind='stable')
            chaves = chaves[ordem]
            vizinhos = vizinhos[ordem]
            if len(chaves) > 1:
                iguais = np.flatnonzero(chaves[1:] == chaves[:-1])
                if iguais.size:
                    i = int(iguais[0])
                    raise ErroRankingDuplicado((v, int(vizinhos[i])), (v, int(vizinhos[i + 1])))
            incidencia = _Incidencia(vizinhos.tolist(), self.visao.copias[lado])

        self._incidencias[v] = incidencia
        return incidencia

    def _elegivel(self, v: int, w: int) -> bool:
        lado_v = self.visao.lado(v)
        if lado_v is None:
            return False
        lado_w = self.visao.lado(w)
        return lado_w is not None and lado_w != lado_v

    def _avancar(self, v: int, incidencia: _Incidencia, ate: int) -> Optional[Tuple[int, int]]:
        """
        Move o cursor de v até a posição ate ou até saturar

        Returns:
            Aresta cuja multiplicidade ainda não é conhecida, ou None
        """
        while incidencia.cursor < ate and not incidencia.saturado:
            w = incidencia.vizinhos[incidencia.cursor]
            carga = incidencia.prefixo[-1]
            if self._elegivel(v, w):
                multiplicidade = self._multiplicidades.get(aresta_canonica(v, w))
                if multiplicidade is None:
                    return aresta_canonica(v, w)
                carga += multiplicidade
            incidencia.prefixo.append(carga)
        return None

    def _multiplicidade(self, v: int, w: int) -> int:
        """
        Multiplicidade de uma aresta elegível

        Pilha explícita: um quadro avança as duas pontas até a posição da
        aresta; uma aresta anterior desconhecida vira um quadro novo, de
        chave estritamente menor.
        """
        aresta = aresta_canonica(v, w)
        pilha = [aresta]
        while pilha:
            a, b = pilha[-1]
            if (a, b) in self._multiplicidades:
                pilha.pop()
                continue

            residuos = []
            for x, y in ((a, b), (b, a)):
                incidencia = self._incidencia(x)
                i = incidencia.posicao[y]
                pendente = self._avancar(x, incidencia, i)
                if pendente is not None:
                    pilha.append(pendente)
                    break
                residuos.append(incidencia.capacidade - incidencia.carga_antes(i))
            else:
                self._multiplicidades[(a, b)] = min(residuos)
                self.stats.registrar_visita(a)
                self.stats.registrar_visita(b)
                pilha.pop()

        return self._multiplicidades[aresta]

    def _parceiro(self, x: int) -> Optional[int]:
        if not self.visao.pertence(x):
            return None
        v, j = self.visao.vertice_base(x), self.visao.copia(x)
        if j >= self.carga(v):
            return None

        incidencia = self._incidencias[v]
        i = bisect_right(incidencia.prefixo, j) - 1
        w = incidencia.vizinhos[i]
        outra = self._incidencias[w]
        # multiplicidade positiva: o cursor de w já passou da aresta
        inicio = outra.carga_antes(outra.posicao[v])
        return self.visao.virtual(w, inicio + j - incidencia.prefixo[i])


Oraculo = Union[OraculoRGMM, OraculoBMatching]


class RgmmService:
    """
    Consultas pontuais ao oráculo RGMM
    """

    @staticmethod
    def oraculo(visao, ranking: RankFunction, rng: Optional[np.random.Generator] = None,
                enumerador: Optional[EnumeradorVizinhos] = None) -> Oraculo:
        """OraculoBMatching para visões duplicadas, OraculoRGMM para as demais"""
        classe = OraculoBMatching if isinstance(visao, DuplicatedBipartiteView) else OraculoRGMM
        return classe(visao, ranking, rng=rng, enumerador=enumerador)

    @staticmethod
    def vertex_matched(visao, ranking: RankFunction, v: int) -> OracleAnswer:
        """Consulta isolada; para várias consultas consistentes reutilize o oráculo"""
        return RgmmService.oraculo(visao, ranking).vertex_matched(v)

    @staticmethod
    def matched_edge(visao, ranking: RankFunction, v: int) -> Optional[Tuple[int, int]]:
        return RgmmService.oraculo(visao, ranking).matched_edge(v)

    @staticmethod
    def visit_profile(visao, sample_count: int, seed: int) -> Counter:
        """
        Perfil empírico de visitas por vértice base

        Executa vertex_matched a partir de sample_count vértices uniformes,
        cada um com ranking e memoização novos.

        Args:
            visao: visão consultada
            sample_count: número de consultas (>= 1)
            seed: semente da sequência de consultas

        Returns:
            Counter vértice base -> número de visitas
        """
        if sample_count < 1:
            raise ValueError("sample_count deve ser >= 1")

        sementes = np.random.SeedSequence(seed).spawn(sample_count)
        antes = Counter(visao.stats.per_vertex_visits)
        for semente in sementes:
            rng = np.random.default_rng(semente)
            ranking = RankFunction(int(semente.generate_state(1, dtype=np.uint64)[0]))
            inicio = int(rng.integers(0, visao.universo))
            RgmmService.oraculo(visao, ranking, rng=rng).vertex_matched(inicio)

        depois = Counter(visao.stats.per_vertex_visits)
        depois.subtract(antes)
        perfil = +depois
        logger.debug(f"Perfil de visitas: {sample_count} consultas, {sum(perfil.values())} visitas")
        return perfil
