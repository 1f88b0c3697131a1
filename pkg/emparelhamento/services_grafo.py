"""
Núcleo de grafos do estimador
Armazenamento imutável, oráculos de lista/matriz com contabilidade exata de sondagens
"""
import json
import threading
from collections import Counter
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from .excecoes import ErroFormatoGrafo, ErroValidacaoGrafo


class OracleStats:
    """
    Contadores de sondagens e visitas de um run do estimador

    Incrementos são protegidos por lock: vários workers podem acumular no
    mesmo objeto e cada contador permanece linearizável.
    """

    def __init__(self):
        self._lock = threading.Lock()
        self.list_probes_total = 0
        self.matrix_probes_total = 0
        self.per_vertex_visits: Counter = Counter()
        self.per_vertex_list_probes: Counter = Counter()

    def registrar_list_probe(self, v: int):
        with self._lock:
            self.list_probes_total += 1
            self.per_vertex_list_probes[v] += 1

    def registrar_matrix_probe(self):
        with self._lock:
            self.matrix_probes_total += 1

    def registrar_visita(self, v: int, vezes: int = 1):
        with self._lock:
            self.per_vertex_visits[v] += vezes

    @property
    def total(self) -> int:
        return self.list_probes_total + self.matrix_probes_total

    def mesclar(self, outro: 'OracleStats'):
        """Acumula os contadores de outro run neste"""
        with self._lock:
            self.list_probes_total += outro.list_probes_total
            self.matrix_probes_total += outro.matrix_probes_total
            self.per_vertex_visits.update(outro.per_vertex_visits)
            self.per_vertex_list_probes.update(outro.per_vertex_list_probes)

    def snapshot(self) -> Dict:
        """
        Fotografia serializável dos contadores

        Returns:
            {'list_probes': int, 'matrix_probes': int,
             'per_vertex': [{'vertex', 'visits', 'list_probes'}, ...]}
        """
        with self._lock:
            vertices = sorted(set(self.per_vertex_visits) | set(self.per_vertex_list_probes))
            return {
                'list_probes': self.list_probes_total,
                'matrix_probes': self.matrix_probes_total,
                'per_vertex': [
                    {
                        'vertex': v,
                        'visits': self.per_vertex_visits.get(v, 0),
                        'list_probes': self.per_vertex_list_probes.get(v, 0),
                    }
                    for v in vertices
                ],
            }

    def to_json(self) -> str:
        return json.dumps(self.snapshot())


def aresta_canonica(u: int, v: int) -> Tuple[int, int]:
    return (u, v) if u < v else (v, u)


class Graph:
    """
    Grafo simples não direcionado, imutável após a construção

    Listas de adjacência preservam a ordem de inserção das arestas e são a
    única fonte de verdade por trás dos oráculos de lista e de matriz.
    """

    def __init__(self, n: int, adjacency: Sequence[Sequence[int]], stats: Optional[OracleStats] = None):
        self.n = n
        self.adjacency: Tuple[Tuple[int, ...], ...] = tuple(tuple(lista) for lista in adjacency)
        self._conjuntos = tuple(frozenset(lista) for lista in self.adjacency)
        self.m = sum(len(lista) for lista in self.adjacency) // 2
        self.stats = stats if stats is not None else OracleStats()

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Tuple[int, int]]) -> 'Graph':
        """
        Constrói o grafo validando cada aresta

        Raises:
            ErroValidacaoGrafo: laço, id fora da faixa ou aresta duplicada
        """
        if n < 0:
            raise ErroValidacaoGrafo(f"Número de vértices negativo: {n}")
        adjacencia: List[List[int]] = [[] for _ in range(n)]
        vistas = set()
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ErroValidacaoGrafo(f"Aresta ({u}, {v}) fora da faixa [0, {n})")
            if u == v:
                raise ErroValidacaoGrafo(f"Laço no vértice {u}")
            chave = aresta_canonica(u, v)
            if chave in vistas:
                raise ErroValidacaoGrafo(f"Aresta duplicada ({u}, {v})")
            vistas.add(chave)
            adjacencia[u].append(v)
            adjacencia[v].append(u)
        return cls(n, adjacencia)

    # Acesso direto, sem contabilidade: referências exatas e testes

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def edges(self) -> Iterator[Tuple[int, int]]:
        """Arestas (u, v) com u < v, na ordem das listas"""
        for u, lista in enumerate(self.adjacency):
            for v in lista:
                if u < v:
                    yield (u, v)

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._conjuntos[u]

    def max_degree(self) -> int:
        return max((len(lista) for lista in self.adjacency), default=0)

    def average_degree(self) -> float:
        return 2 * self.m / self.n if self.n else 0.0

    def instrumentado(self) -> 'Graph':
        """Mesma estrutura imutável com contadores novos"""
        clone = Graph.__new__(Graph)
        clone.n = self.n
        clone.adjacency = self.adjacency
        clone._conjuntos = self._conjuntos
        clone.m = self.m
        clone.stats = OracleStats()
        return clone

    # Oráculo de lista (protocolo compartilhado com MatrixToListView)

    @property
    def universo(self) -> int:
        return self.n

    def validar_vertice(self, v: int):
        if not 0 <= v < self.n:
            raise ErroValidacaoGrafo(f"Vértice inválido: {v} (n={self.n})")

    def grau_maximo(self, v: int) -> int:
        return max(self.n - 1, 0)

    def list_probe(self, v: int, i: int) -> Optional[int]:
        self.validar_vertice(v)
        if i < 0:
            raise ErroValidacaoGrafo(f"Índice negativo: {i}")
        self.stats.registrar_list_probe(v)
        lista = self.adjacency[v]
        return lista[i] if i < len(lista) else None

    def matrix_probe(self, u: int, v: int) -> bool:
        self.validar_vertice(u)
        self.validar_vertice(v)
        self.stats.registrar_matrix_probe()
        return v in self._conjuntos[u]


class GrafoService:
    """
    Operações de carga e consulta de grafos no modelo de consultas
    """

    @staticmethod
    def load_graph(texto: str) -> Graph:
        """
        Carrega um grafo do formato lista de arestas

        Formato: cabeçalho "n m" seguido de m linhas "u v". Linhas vazias são ignoradas.

        Args:
            texto: conteúdo do arquivo

        Returns:
            Graph validado

        Raises:
            ErroFormatoGrafo: linha malformada ou contagem de arestas divergente
            ErroValidacaoGrafo: laço, id fora da faixa, aresta duplicada
        """
        linhas = [linha.strip() for linha in texto.splitlines()]
        linhas = [linha for linha in linhas if linha]
        if not linhas:
            raise ErroFormatoGrafo("Arquivo vazio: cabeçalho 'n m' ausente")

        n, m = GrafoService._ler_par(linhas[0], 1)
        if n < 0 or m < 0:
            raise ErroFormatoGrafo(f"Cabeçalho inválido: {linhas[0]!r}")
        if len(linhas) - 1 != m:
            raise ErroFormatoGrafo(
                f"Cabeçalho declara {m} arestas mas o arquivo contém {len(linhas) - 1}"
            )

        arestas = [GrafoService._ler_par(linha, numero + 2) for numero, linha in enumerate(linhas[1:])]
        return Graph.from_edges(n, arestas)

    @staticmethod
    def _ler_par(linha: str, numero: int) -> Tuple[int, int]:
        partes = linha.split()
        if len(partes) != 2:
            raise ErroFormatoGrafo(f"Linha {numero} malformada: {linha!r}")
        try:
            return int(partes[0]), int(partes[1])
        except ValueError:
            raise ErroFormatoGrafo(f"Linha {numero} com valor não inteiro: {linha!r}")

    @staticmethod
    def dump_graph(g: Graph) -> str:
        """Serializa no formato aceito por load_graph"""
        linhas = [f"{g.n} {g.m}"]
        linhas.extend(f"{u} {v}" for u, v in g.edges())
        return "\n".join(linhas) + "\n"

    @staticmethod
    def list_probe(g, v: int, i: int) -> Optional[int]:
        """i-ésimo vizinho de v (base 0) ou None; custa uma sondagem de lista"""
        return g.list_probe(v, i)

    @staticmethod
    def matrix_probe(g, u: int, v: int) -> bool:
        """Existência da aresta (u, v); custa uma sondagem de matriz"""
        return g.matrix_probe(u, v)

    @staticmethod
    def degree_via_binary_search(g, v: int) -> int:
        """
        Grau exato de v por busca binária sobre o oráculo de lista

        Usa no máximo ceil(log2(grau_maximo + 1)) sondagens: sondar o índice i
        e receber None implica grau <= i.

        Args:
            g: qualquer oráculo de lista (Graph ou MatrixToListView)
            v: vértice consultado
        """
        g.validar_vertice(v)
        baixo, alto = 0, g.grau_maximo(v)
        while baixo < alto:
            meio = (baixo + alto) // 2
            if g.list_probe(v, meio) is None:
                alto = meio
            else:
                baixo = meio + 1
        return baixo
