"""
Visões virtuais sobre oráculos de lista
Subgrafo induzido, bipartido com cópias por capacidade e redução matriz -> lista
"""
import math
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
from django.conf import settings

from .excecoes import ErroExaustaoAmostragem, ErroValidacaoGrafo
from .services_grafo import GrafoService


def limite_padrao_sondagens(universo: int) -> int:
    """Limite de tentativas da amostragem por rejeição: PROBE_CAP_FATOR * n"""
    fator = settings.EMPARELHAMENTO.get('PROBE_CAP_FATOR', 64)
    return int(fator) * max(universo, 1)


class EnumeradorVizinhos:
    """
    Enumeração completa de vizinhos de vértices base

    Cada vizinho é obtido por sorteio uniforme de índice com reposição, com
    um conjunto de vistos, até que todos os grau(v) vizinhos apareçam.
    Graus e listas ficam em cache pelo escopo de um run do estimador.
    """

    LOTE_MINIMO = 16
    LOTE_MAXIMO = 4096

    def __init__(self, base, rng: np.random.Generator):
        self.base = base
        self.rng = rng
        self._graus: Dict[int, int] = {}
        self._listas: Dict[int, List[int]] = {}

    def grau(self, v: int) -> int:
        grau = self._graus.get(v)
        if grau is None:
            grau = GrafoService.degree_via_binary_search(self.base, v)
            self._graus[v] = grau
        return grau

    def vizinhos(self, v: int) -> List[int]:
        lista = self._listas.get(v)
        if lista is not None:
            return lista

        grau = self.grau(v)
        vistos: Dict[int, None] = {}
        while len(vistos) < grau:
            tamanho = min(max(grau, self.LOTE_MINIMO), self.LOTE_MAXIMO)
            for i in self.rng.integers(0, grau, size=tamanho).tolist():
                vistos[self.base.list_probe(v, i)] = None
                if len(vistos) == grau:
                    break

        lista = list(vistos)
        self._listas[v] = lista
        return lista


class VisaoGrafo:
    """
    Visão identidade sobre um oráculo de lista

    Subclasses redefinem pertinência, adjacência e o mapeamento entre ids
    virtuais e vértices base. Nenhuma visão materializa arestas: toda
    consulta passa pelo oráculo base e é contabilizada nele.
    """

    def __init__(self, base):
        self.base = base
        self._graus: Dict[int, int] = {}

    @property
    def stats(self):
        return self.base.stats

    @property
    def universo(self) -> int:
        return self.base.universo

    def vertice_base(self, x: int) -> int:
        return x

    def pertence(self, x: int) -> bool:
        return True

    def adjacente(self, x: int, y: int) -> bool:
        return self.pertence(y)

    def sortear_candidato(self, x: int, w: int, rng: np.random.Generator) -> int:
        return w

    def grau_base(self, v: int) -> int:
        grau = self._graus.get(v)
        if grau is None:
            grau = GrafoService.degree_via_binary_search(self.base, v)
            self._graus[v] = grau
        return grau

    def random_neighbor(self, x: int, rng: np.random.Generator, limite: Optional[int] = None) -> int:
        """
        Vizinho uniforme de x dentro da visão por amostragem por rejeição

        Sorteia um índice uniforme da lista base, sonda e testa pertinência
        até aceitar. Cada tentativa custa exatamente uma sondagem de lista.

        Raises:
            ErroExaustaoAmostragem: limite de tentativas atingido
        """
        limite = limite if limite is not None else limite_padrao_sondagens(self.universo)
        v = self.vertice_base(x)
        grau = self.grau_base(v)
        if grau == 0:
            raise ErroExaustaoAmostragem(x, 0)

        tentativas = 0
        while tentativas < limite:
            lote = min(limite - tentativas, 64)
            for i in rng.integers(0, grau, size=lote).tolist():
                tentativas += 1
                w = self.base.list_probe(v, i)
                y = self.sortear_candidato(x, w, rng)
                if self.adjacente(x, y):
                    return y
        raise ErroExaustaoAmostragem(x, tentativas)


class InducedSubgraphView(VisaoGrafo):
    """G[S] onde S é dado por um predicado de pertinência (ex.: "livre em M")"""

    def __init__(self, base, membro: Callable[[int], bool]):
        super().__init__(base)
        self._membro = membro
        self._pertinencia: Dict[int, bool] = {}

    def pertence(self, x: int) -> bool:
        resposta = self._pertinencia.get(x)
        if resposta is None:
            resposta = bool(self._membro(x))
            self._pertinencia[x] = resposta
        return resposta

    def adjacente(self, x: int, y: int) -> bool:
        return self.pertence(x) and self.pertence(y)


class DuplicatedBipartiteView(VisaoGrafo):
    """
    G[A, B] com k cópias de cada vértice de A e kb cópias de cada vértice de B

    Id virtual da cópia j do vértice base v: v * largura + j, com
    largura = max(k, kb). Posições j >= cópias do lado não são vértices.
    Um emparelhamento maximal nesta visão equivale a um b-emparelhamento
    maximal em G[A, B] com capacidades k e kb; o oráculo local dela é
    OraculoBMatching.

    Args:
        base: oráculo de lista sobre G
        lado_de: vértice base -> 'A', 'B' ou None (fora de A e de B)
        k: cópias de cada vértice de A
        kb: cópias de cada vértice de B (inteiro, já arredondado para cima)
    """

    LADO_A = 'A'
    LADO_B = 'B'

    def __init__(self, base, lado_de: Callable[[int], Optional[str]], k: int, kb: int):
        super().__init__(base)
        if k < 1 or kb < 1:
            raise ErroValidacaoGrafo(f"Capacidades devem ser positivas: k={k}, kb={kb}")
        self.k = int(k)
        self.kb = int(kb)
        self.copias = {self.LADO_A: self.k, self.LADO_B: self.kb}
        self.largura = max(self.k, self.kb)
        self._lado_de = lado_de
        self._lados: Dict[int, Optional[str]] = {}

    @property
    def universo(self) -> int:
        return self.base.universo * self.largura

    def lado(self, v: int) -> Optional[str]:
        if v in self._lados:
            return self._lados[v]
        lado = self._lado_de(v)
        self._lados[v] = lado
        return lado

    def vertice_base(self, x: int) -> int:
        return x // self.largura

    def copia(self, x: int) -> int:
        return x % self.largura

    def virtual(self, v: int, j: int) -> int:
        return v * self.largura + j

    def pertence(self, x: int) -> bool:
        lado = self.lado(x // self.largura)
        return lado is not None and x % self.largura < self.copias[lado]

    def adjacente(self, x: int, y: int) -> bool:
        lado_x = self.lado(x // self.largura)
        if lado_x is None:
            return False
        lado_y = self.lado(y // self.largura)
        return lado_y is not None and lado_y != lado_x and y % self.largura < self.copias[lado_y]

    def sortear_candidato(self, x: int, w: int, rng: np.random.Generator) -> int:
        return w * self.largura + int(rng.integers(0, self.largura))


class MatrixToListView:
    """
    Grafo H simulando um oráculo de lista a partir do oráculo de matriz de G

    Classes de vértices virtuais (ids aritméticos, nada é materializado):
        V1 = [0, n), V2 = [n, 2n), U_j = [2n + j*L, 2n + (j+1)*L) com L = n * ceil(ln(n)^2)

    Graus fixos: V1 -> n, V2 -> n + L, U_j -> 1. Cada resolução de vizinho
    usa no máximo uma sondagem de matriz.
    """

    CLASSE_V1 = 'V1'
    CLASSE_V2 = 'V2'
    CLASSE_U = 'U'

    def __init__(self, g):
        self.g = g
        self.n = g.n
        self.log2n = math.ceil(math.log(self.n) ** 2) if self.n > 1 else 0
        self.tamanho_u = self.n * self.log2n
        self.stats = g.stats

    @property
    def universo(self) -> int:
        return 2 * self.n + self.n * self.tamanho_u

    def id_v1(self, i: int) -> int:
        return i

    def id_v2(self, i: int) -> int:
        return self.n + i

    def id_u(self, j: int, t: int) -> int:
        return 2 * self.n + j * self.tamanho_u + t

    def classe(self, x: int) -> Tuple[str, int, int]:
        """(classe, índice, posição dentro de U_j); posição é 0 fora de U"""
        self.validar_vertice(x)
        if x < self.n:
            return self.CLASSE_V1, x, 0
        if x < 2 * self.n:
            return self.CLASSE_V2, x - self.n, 0
        j, t = divmod(x - 2 * self.n, self.tamanho_u)
        return self.CLASSE_U, j, t

    def validar_vertice(self, x: int):
        if not 0 <= x < self.universo:
            raise ErroValidacaoGrafo(f"Vértice virtual inválido: {x} (universo={self.universo})")

    def grau(self, x: int) -> int:
        classe, _, _ = self.classe(x)
        if classe == self.CLASSE_V1:
            return self.n
        if classe == self.CLASSE_V2:
            return self.n + self.tamanho_u
        return 1

    def grau_maximo(self, x: int) -> int:
        return self.grau(x)

    def list_probe(self, x: int, i: int) -> Optional[int]:
        if i < 0:
            raise ErroValidacaoGrafo(f"Índice negativo: {i}")
        classe, j, _ = self.classe(x)
        self.stats.registrar_list_probe(x)

        if classe == self.CLASSE_U:
            return self.id_v2(j) if i == 0 else None

        if i < self.n:
            aresta = self.g.matrix_probe(j, i)
            if classe == self.CLASSE_V1:
                return self.id_v1(i) if aresta else self.id_v2(i)
            return self.id_v2(i) if aresta else self.id_v1(i)

        if classe == self.CLASSE_V2 and i < self.n + self.tamanho_u:
            return self.id_u(j, i - self.n)
        return None


class VisaoService:
    """Operações de consulta sobre visões"""

    @staticmethod
    def random_neighbor(visao: VisaoGrafo, x: int, rng: np.random.Generator,
                        limite: Optional[int] = None) -> int:
        return visao.random_neighbor(x, rng, limite)

    @staticmethod
    def matrix_view_neighbor(visao: MatrixToListView, x: int, i: int) -> Optional[int]:
        """
        i-ésimo vizinho (base 0) do vértice virtual x em H

        V1[v], i < n: aresta (v, i) em G -> V1[i], senão V2[i]
        V2[v], i < n: aresta (v, i) em G -> V2[i], senão V1[i]
        V2[v], n <= i < n + L: U_v[i - n]
        U_j, i = 0: V2[j]
        """
        return visao.list_probe(x, i)
