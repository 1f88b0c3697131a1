"""
Algoritmos de referência exatos
Emparelhamento máximo, guloso por ranking, b-emparelhamento maximal,
streaming de duas passadas e verificações de limite fracionário
"""
import logging
import math
from collections import Counter, deque
from dataclasses import asdict, dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

from .excecoes import ErroGrafoNaoBipartido, ErroRankingDuplicado, ErroValidacaoGrafo
from .services_grafo import Graph, aresta_canonica

logger = logging.getLogger('emparelhamento.exato')


class Matching:
    """Conjunto de arestas sem pontas em comum, com índice inverso de parceiros"""

    def __init__(self, edges: Iterable[Tuple[int, int]] = ()):
        self.edges: Set[Tuple[int, int]] = set()
        self.matched_of: Dict[int, int] = {}
        for u, v in edges:
            self.add(u, v)

    def add(self, u: int, v: int):
        if u == v:
            raise ErroValidacaoGrafo(f"Laço ({u}, {v}) não pode entrar no emparelhamento")
        if u in self.matched_of or v in self.matched_of:
            raise ErroValidacaoGrafo(f"Aresta ({u}, {v}) repete uma ponta já emparelhada")
        self.edges.add(aresta_canonica(u, v))
        self.matched_of[u] = v
        self.matched_of[v] = u

    def partner(self, v: int) -> Optional[int]:
        return self.matched_of.get(v)

    def __contains__(self, v: int) -> bool:
        return v in self.matched_of

    def __len__(self) -> int:
        return len(self.edges)

    def vertices(self) -> Set[int]:
        return set(self.matched_of)

    def is_maximal_in(self, g: Graph) -> bool:
        return all(u in self.matched_of or v in self.matched_of for u, v in g.edges())


class BMatching:
    """
    Multiconjunto de arestas com cargas limitadas por capacidade

    Args:
        capacity: vértice -> capacidade; vértices ausentes têm capacidade 0
    """

    def __init__(self, capacity: Dict[int, int]):
        self.capacity = dict(capacity)
        self.edges: Counter = Counter()
        self.load: Counter = Counter()

    def residual(self, v: int) -> int:
        return self.capacity.get(v, 0) - self.load[v]

    def add(self, u: int, v: int, multiplicidade: int = 1):
        if multiplicidade < 1:
            return
        if multiplicidade > min(self.residual(u), self.residual(v)):
            raise ErroValidacaoGrafo(f"Aresta ({u}, {v}) x{multiplicidade} excede a capacidade")
        self.edges[aresta_canonica(u, v)] += multiplicidade
        self.load[u] += multiplicidade
        self.load[v] += multiplicidade

    def __len__(self) -> int:
        return sum(self.edges.values())

    def support(self) -> Set[Tuple[int, int]]:
        return set(self.edges)


class ApproxConstants:
    """Constantes da garantia 0.5109"""

    B = 1 + math.sqrt(2)
    BETA = (12 + 2 * math.sqrt(2)) / 17
    GAMMA = 4 * (5 - 2 * math.sqrt(2)) / 17

    @classmethod
    def k_para_epsilon(cls, eps: float) -> int:
        """Menor inteiro estritamente maior que 1 / (b * eps^3)"""
        if not 0 < eps < 1:
            raise ErroValidacaoGrafo(f"epsilon deve estar em (0, 1): {eps}")
        return math.floor(1 / (cls.B * eps ** 3)) + 1

    @classmethod
    def kb_inteiro(cls, k: int) -> int:
        return math.ceil(k * cls.B)

    @classmethod
    def epsilon_de_k(cls, k: int) -> float:
        return (cls.B * k) ** (-1 / 3)

    @classmethod
    def residuo_equilibrio(cls) -> float:
        """beta/2 + (2 - sqrt2)(1 - beta) - (2 - sqrt2) beta; zero até o arredondamento"""
        c = 2 - math.sqrt(2)
        return cls.BETA / 2 + c * (1 - cls.BETA) - c * cls.BETA


@dataclass
class RelatorioFracionario:
    lado1: float
    lado2: float
    mu: int
    limite: float
    folga1: float
    folga2: float
    violacao: bool

    def to_dict(self) -> Dict:
        return asdict(self)


class HopcroftKarp:
    """
    Emparelhamento máximo bipartido por caminhos aumentantes mínimos

    Guarda os dados temporários do algoritmo. NIL é o índice -1.
    """

    def __init__(self, adjacency: Sequence[Sequence[int]], esquerda: Sequence[int],
                 inicial: Optional[Matching] = None):
        self.adj = adjacency
        self.esquerda = list(esquerda)
        n = len(adjacency)
        self.par = [-1] * n
        if inicial is not None:
            for u, v in inicial.edges:
                self.par[u] = v
                self.par[v] = u
        self.dist: Dict[int, float] = {}

    def _conectar_livres(self) -> bool:
        """BFS em camadas a partir dos vértices livres da esquerda"""
        infinito = math.inf
        fila = deque()
        for u in self.esquerda:
            if self.par[u] == -1:
                self.dist[u] = 0
                fila.append(u)
            else:
                self.dist[u] = infinito
        self.dist[-1] = infinito
        while fila:
            u = fila.popleft()
            if self.dist[u] < self.dist[-1]:
                for v in self.adj[u]:
                    w = self.par[v]
                    if self.dist[w] == infinito:
                        self.dist[w] = self.dist[u] + 1
                        if w != -1:
                            fila.append(w)
        return self.dist[-1] != infinito

    def _aumentar(self, raiz: int) -> bool:
        """DFS iterativa ao longo das camadas; aplica o caminho encontrado"""
        pilha = [(raiz, iter(self.adj[raiz]))]
        arestas_v: List[int] = []
        while pilha:
            u, vizinhos = pilha[-1]
            avancou = False
            for v in vizinhos:
                w = self.par[v]
                if self.dist[w] != self.dist[u] + 1:
                    continue
                if w == -1:
                    caminho_u = [quadro[0] for quadro in pilha]
                    for ui, vi in zip(caminho_u, arestas_v + [v]):
                        self.par[ui] = vi
                        self.par[vi] = ui
                    return True
                pilha.append((w, iter(self.adj[w])))
                arestas_v.append(v)
                avancou = True
                break
            if not avancou:
                self.dist[u] = math.inf
                pilha.pop()
                if arestas_v:
                    arestas_v.pop()
        return False

    def __call__(self) -> Matching:
        while self._conectar_livres():
            for u in self.esquerda:
                if self.par[u] == -1:
                    self._aumentar(u)
        return Matching((u, self.par[u]) for u in self.esquerda if self.par[u] != -1)


class EdmondsBlossom:
    """
    Emparelhamento máximo em grafos gerais (Edmonds, contração de flores)

    Uma busca em largura por raiz livre; ciclos ímpares são contraídos
    reescrevendo base[] e o caminho aumentante é reconstruído por p[].
    """

    def __init__(self, adjacency: Sequence[Sequence[int]], inicial: Optional[Matching] = None):
        self.adj = adjacency
        self.n = len(adjacency)
        self.par = [-1] * self.n
        if inicial is not None:
            for u, v in inicial.edges:
                self.par[u] = v
                self.par[v] = u
        self.base: List[int] = []
        self.p: List[int] = []
        self.usado: List[bool] = []
        self.flor: List[bool] = []

    def _ancestral_comum(self, a: int, b: int) -> int:
        marcado = [False] * self.n
        while True:
            a = self.base[a]
            marcado[a] = True
            if self.par[a] == -1:
                break
            a = self.p[self.par[a]]
        while True:
            b = self.base[b]
            if marcado[b]:
                return b
            b = self.p[self.par[b]]

    def _marcar_caminho(self, v: int, b: int, filho: int):
        while self.base[v] != b:
            self.flor[self.base[v]] = True
            self.flor[self.base[self.par[v]]] = True
            self.p[v] = filho
            filho = self.par[v]
            v = self.p[self.par[v]]

    def _buscar_caminho(self, raiz: int) -> int:
        self.usado = [False] * self.n
        self.p = [-1] * self.n
        self.base = list(range(self.n))
        self.usado[raiz] = True
        fila = deque([raiz])
        while fila:
            v = fila.popleft()
            for w in self.adj[v]:
                if self.base[v] == self.base[w] or self.par[v] == w:
                    continue
                if w == raiz or (self.par[w] != -1 and self.p[self.par[w]] != -1):
                    base_comum = self._ancestral_comum(v, w)
                    self.flor = [False] * self.n
                    self._marcar_caminho(v, base_comum, w)
                    self._marcar_caminho(w, base_comum, v)
                    for i in range(self.n):
                        if self.flor[self.base[i]]:
                            self.base[i] = base_comum
                            if not self.usado[i]:
                                self.usado[i] = True
                                fila.append(i)
                elif self.p[w] == -1:
                    self.p[w] = v
                    if self.par[w] == -1:
                        return w
                    proximo = self.par[w]
                    self.usado[proximo] = True
                    fila.append(proximo)
        return -1

    def __call__(self) -> Matching:
        for raiz in range(self.n):
            if self.par[raiz] != -1 or not self.adj[raiz]:
                continue
            v = self._buscar_caminho(raiz)
            while v != -1:
                pv = self.p[v]
                ppv = self.par[pv]
                self.par[v] = pv
                self.par[pv] = v
                v = ppv
        return Matching((u, self.par[u]) for u in range(self.n) if self.par[u] > u)


class ExatoService:
    """
    Referências exatas usadas como oráculo pelos testes e pelo modo exact_reference
    """

    @staticmethod
    def colorir_bipartido(g: Graph) -> Optional[List[int]]:
        """2-coloração por BFS; None se houver ciclo ímpar"""
        cor = [-1] * g.n
        for inicio in range(g.n):
            if cor[inicio] != -1:
                continue
            cor[inicio] = 0
            fila = deque([inicio])
            while fila:
                u = fila.popleft()
                for v in g.adjacency[u]:
                    if cor[v] == -1:
                        cor[v] = 1 - cor[u]
                        fila.append(v)
                    elif cor[v] == cor[u]:
                        return None
        return cor

    @staticmethod
    def exact_max_matching(g: Graph, inicial: Optional[Matching] = None) -> Matching:
        """
        Emparelhamento máximo de g

        Bipartidos usam Hopcroft-Karp; os demais, Edmonds. Ambos partem do
        emparelhamento inicial, se fornecido.

        Args:
            g: grafo materializado
            inicial: emparelhamento válido de g usado como ponto de partida

        Returns:
            Matching de tamanho mu(g)
        """
        cor = ExatoService.colorir_bipartido(g)
        if cor is not None:
            esquerda = [v for v in range(g.n) if cor[v] == 0]
            return HopcroftKarp(g.adjacency, esquerda, inicial)()
        return EdmondsBlossom(g.adjacency, inicial)()

    @staticmethod
    def _arestas_ordenadas(g: Graph, ranks, rotulos: Optional[Sequence[int]]) -> List[Tuple[int, int]]:
        chaveadas = []
        for u, v in g.edges():
            ru, rv = (rotulos[u], rotulos[v]) if rotulos is not None else (u, v)
            chaveadas.append((ranks.chave(ru, rv), u, v))
        chaveadas.sort()
        for anterior, atual in zip(chaveadas, chaveadas[1:]):
            if anterior[0] == atual[0]:
                raise ErroRankingDuplicado(anterior[1:], atual[1:])
        return [(u, v) for _, u, v in chaveadas]

    @staticmethod
    def gmm(g: Graph, ranks, rotulos: Optional[Sequence[int]] = None) -> Matching:
        """
        Emparelhamento guloso: arestas em ordem crescente de rank, aceitas se ambas as pontas livres

        Args:
            g: grafo materializado
            ranks: RankFunction
            rotulos: id usado no ranking para cada vértice local de g (subgrafos materializados)

        Raises:
            ErroRankingDuplicado: duas arestas com o mesmo rank
        """
        emparelhamento = Matching()
        for u, v in ExatoService._arestas_ordenadas(g, ranks, rotulos):
            if u not in emparelhamento and v not in emparelhamento:
                emparelhamento.add(u, v)
        return emparelhamento

    @staticmethod
    def maximal_bmatching(g: Graph, k: int, kb: int, ranks, lados: Optional[Sequence[Optional[str]]] = None,
                          rotulos: Optional[Sequence[int]] = None) -> BMatching:
        """
        b-emparelhamento maximal guloso em G[A, B]

        Em ordem de rank, cada aresta entre A e B recebe multiplicidade igual
        ao menor resíduo das pontas.

        Args:
            g: grafo materializado
            k: capacidade dos vértices de A
            kb: capacidade (inteira) dos vértices de B
            ranks: RankFunction
            lados: 'A', 'B' ou None por vértice; default é a 2-coloração de g (cor 0 = A)
            rotulos: ids usados no ranking

        Raises:
            ErroGrafoNaoBipartido: lados omitidos e g não bipartido
        """
        if lados is None:
            cor = ExatoService.colorir_bipartido(g)
            if cor is None:
                raise ErroGrafoNaoBipartido("maximal_bmatching exige grafo bipartido")
            lados = ['A' if c == 0 else 'B' for c in cor]

        capacidade = {}
        for v in range(g.n):
            if lados[v] == 'A':
                capacidade[v] = k
            elif lados[v] == 'B':
                capacidade[v] = kb
        bmatching = BMatching(capacidade)

        for u, v in ExatoService._arestas_ordenadas(g, ranks, rotulos):
            if lados[u] is None or lados[v] is None or lados[u] == lados[v]:
                continue
            bmatching.add(u, v, min(bmatching.residual(u), bmatching.residual(v)))
        return bmatching

    @staticmethod
    def two_pass_streaming(stream: Sequence[Tuple[int, int]], eps: float, k: Optional[int] = None) -> float:
        """
        Estimativa de duas passadas: (1 - 1/b)|M| + |B| / (kb)

        Passada 1: guloso maximal M na ordem do stream. Passada 2: cada aresta
        de G[V(M), V - V(M)] recebe multiplicidade min(k - carga(u), ceil(kb) - carga(v)).

        Args:
            stream: sequência de arestas
            eps: precisão; define k quando k não é informado
            k: capacidade de A (sobrepõe o valor derivado de eps)

        Raises:
            ErroGrafoNaoBipartido: o stream contém ciclo ímpar
        """
        arestas = [(int(u), int(v)) for u, v in stream]
        n = max((max(u, v) for u, v in arestas), default=-1) + 1
        g = Graph.from_edges(n, arestas)
        if ExatoService.colorir_bipartido(g) is None:
            raise ErroGrafoNaoBipartido("two_pass_streaming exige stream bipartido")

        k = k if k is not None else ApproxConstants.k_para_epsilon(eps)
        kb = k * ApproxConstants.B
        kb_inteiro = math.ceil(kb)

        emparelhamento = Matching()
        for u, v in arestas:
            if u not in emparelhamento and v not in emparelhamento:
                emparelhamento.add(u, v)

        carga: Counter = Counter()
        tamanho_b = 0
        for u, v in arestas:
            if (u in emparelhamento) == (v in emparelhamento):
                continue
            a, b = (u, v) if u in emparelhamento else (v, u)
            multiplicidade = min(k - carga[a], kb_inteiro - carga[b])
            if multiplicidade > 0:
                carga[a] += multiplicidade
                carga[b] += multiplicidade
                tamanho_b += multiplicidade

        return (1 - 1 / ApproxConstants.B) * len(emparelhamento) + tamanho_b / kb

    @staticmethod
    def check_fractional_bound(M: Matching, Mp: Matching, B1: BMatching, B2: BMatching, g: Graph,
                               k: int) -> RelatorioFracionario:
        """
        Confere |M| + (1-1/b)|M'| + |B1|/kb <= mu e (1-1/b)|M| + |B2|/kb <= mu

        O limite tolera o arredondamento de kb para ceil(kb):
        mu * (1 + (ceil(kb) - kb) / kb) + 1e-9.

        Raises:
            ErroGrafoNaoBipartido: g não bipartido
        """
        if ExatoService.colorir_bipartido(g) is None:
            raise ErroGrafoNaoBipartido("check_fractional_bound vale apenas para grafos bipartidos")

        b = ApproxConstants.B
        kb = k * b
        mu = len(ExatoService.exact_max_matching(g))
        lado1 = len(M) + (1 - 1 / b) * len(Mp) + len(B1) / kb
        lado2 = (1 - 1 / b) * len(M) + len(B2) / kb
        limite = mu * (1 + (math.ceil(kb) - kb) / kb) + 1e-9

        relatorio = RelatorioFracionario(
            lado1=lado1,
            lado2=lado2,
            mu=mu,
            limite=limite,
            folga1=mu - lado1,
            folga2=mu - lado2,
            violacao=lado1 > limite or lado2 > limite,
        )
        if relatorio.violacao:
            logger.error(
                f"Limite fracionário violado: {relatorio.to_dict()} "
                f"M={sorted(M.edges)} M'={sorted(Mp.edges)} "
                f"B1={dict(B1.edges)} B2={dict(B2.edges)}"
            )
        return relatorio

    @staticmethod
    def mu_lower_bound_by_degrees(g: Graph) -> float:
        """n * grau_medio / (4 * grau_maximo) = m / (2 * grau_maximo); 0 sem arestas"""
        if g.m == 0:
            return 0.0
        return g.m / (2 * g.max_degree())
