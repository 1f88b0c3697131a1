"""
Geradores de grafos determinísticos por semente
Especificação textual: "familia:chave=valor,..." (ex.: "erdos-renyi:n=1000,p=8/n,seed=3")
"""
import math
from dataclasses import dataclass, field
from typing import Dict, Optional

import networkx as nx
import numpy as np

from .excecoes import ErroValidacaoGrafo
from .services_grafo import Graph

FAMILIAS = {
    'random-bipartite': ('n', 'p'),
    'erdos-renyi': ('n', 'p'),
    'd-regular': ('n', 'd'),
    'disjoint-matching': ('n',),
    'star': ('n',),
    'hard-dense': ('n', 'eps_h'),
    'path': ('n',),
    'cycle': ('n',),
}


@dataclass
class GeneratorSpec:
    family: str
    n: int
    seed: int = 0
    p: Optional[float] = None
    d: Optional[int] = None
    eps_h: Optional[float] = None
    texto_p: Optional[str] = field(default=None, compare=False)

    def __post_init__(self):
        if self.family not in FAMILIAS:
            raise ErroValidacaoGrafo(
                f"Família desconhecida: {self.family!r} (válidas: {', '.join(sorted(FAMILIAS))})"
            )
        if self.n < 0:
            raise ErroValidacaoGrafo(f"n deve ser não negativo: {self.n}")
        for chave in FAMILIAS[self.family]:
            if getattr(self, chave) is None:
                raise ErroValidacaoGrafo(f"Família {self.family} exige o parâmetro {chave}")
        if self.p is not None and not 0 <= self.p <= 1:
            raise ErroValidacaoGrafo(f"p deve estar em [0, 1]: {self.p}")

    @classmethod
    def parse(cls, texto: str, **sobrepor) -> 'GeneratorSpec':
        """
        Interpreta "familia:chave=valor,..."

        p aceita a forma "c/n", avaliada com o n da especificação.
        Parâmetros em sobrepor (ex.: n) têm precedência sobre o texto.
        """
        familia, _, resto = texto.strip().partition(':')
        brutos: Dict[str, str] = {}
        for par in filter(None, (item.strip() for item in resto.split(','))):
            chave, sep, valor = par.partition('=')
            if not sep:
                raise ErroValidacaoGrafo(f"Parâmetro sem valor em {texto!r}: {par!r}")
            brutos[chave.strip()] = valor.strip()
        brutos.update({chave: str(valor) for chave, valor in sobrepor.items() if valor is not None})

        desconhecidas = set(brutos) - {'n', 'p', 'd', 'eps_h', 'seed'}
        if desconhecidas:
            raise ErroValidacaoGrafo(f"Parâmetros desconhecidos: {sorted(desconhecidas)}")

        try:
            n = int(brutos['n'])
            seed = int(brutos.get('seed', 0))
            d = int(brutos['d']) if 'd' in brutos else None
            eps_h = float(brutos['eps_h']) if 'eps_h' in brutos else None
            p = cls._avaliar_p(brutos['p'], n) if 'p' in brutos else None
        except KeyError:
            raise ErroValidacaoGrafo(f"Especificação sem n: {texto!r}")
        except (ValueError, ZeroDivisionError) as e:
            raise ErroValidacaoGrafo(f"Valor inválido em {texto!r}: {e}")

        return cls(family=familia.strip(), n=n, seed=seed, p=p, d=d, eps_h=eps_h,
                   texto_p=brutos.get('p'))

    @staticmethod
    def _avaliar_p(texto: str, n: int) -> float:
        if texto.endswith('/n'):
            return float(texto[:-2]) / n
        return float(texto)

    def to_string(self) -> str:
        partes = [f"n={self.n}"]
        if self.p is not None:
            partes.append(f"p={self.texto_p or self.p}")
        if self.d is not None:
            partes.append(f"d={self.d}")
        if self.eps_h is not None:
            partes.append(f"eps_h={self.eps_h}")
        partes.append(f"seed={self.seed}")
        return f"{self.family}:{','.join(partes)}"


class GeradorService:
    """
    Famílias de grafos de teste e de benchmark
    """

    @staticmethod
    def generate(spec: GeneratorSpec) -> Graph:
        """
        Grafo da família pedida, idêntico para a mesma especificação

        Raises:
            ErroValidacaoGrafo: parâmetros inviáveis (ex.: d-regular com n*d ímpar)
        """
        gerador = getattr(GeradorService, '_' + spec.family.replace('-', '_'))
        return gerador(spec)

    @staticmethod
    def _de_networkx(n: int, grafo: nx.Graph) -> Graph:
        return Graph.from_edges(n, sorted((min(u, v), max(u, v)) for u, v in grafo.edges()))

    @staticmethod
    def _random_bipartite(spec: GeneratorSpec) -> Graph:
        esquerda = spec.n // 2
        grafo = nx.bipartite.random_graph(esquerda, spec.n - esquerda, spec.p, seed=spec.seed)
        return GeradorService._de_networkx(spec.n, grafo)

    @staticmethod
    def _erdos_renyi(spec: GeneratorSpec) -> Graph:
        grafo = nx.fast_gnp_random_graph(spec.n, spec.p, seed=spec.seed)
        return GeradorService._de_networkx(spec.n, grafo)

    @staticmethod
    def _d_regular(spec: GeneratorSpec) -> Graph:
        if spec.d < 0 or spec.d >= max(spec.n, 1) or (spec.n * spec.d) % 2:
            raise ErroValidacaoGrafo(f"d-regular inviável: n={spec.n}, d={spec.d}")
        grafo = nx.random_regular_graph(spec.d, spec.n, seed=spec.seed)
        return GeradorService._de_networkx(spec.n, grafo)

    @staticmethod
    def _disjoint_matching(spec: GeneratorSpec) -> Graph:
        if spec.n % 2:
            raise ErroValidacaoGrafo(f"disjoint-matching exige n par: {spec.n}")
        return Graph.from_edges(spec.n, [(2 * i, 2 * i + 1) for i in range(spec.n // 2)])

    @staticmethod
    def _star(spec: GeneratorSpec) -> Graph:
        return Graph.from_edges(spec.n, [(0, folha) for folha in range(1, spec.n)])

    @staticmethod
    def _path(spec: GeneratorSpec) -> Graph:
        return GeradorService._de_networkx(spec.n, nx.path_graph(spec.n))

    @staticmethod
    def _cycle(spec: GeneratorSpec) -> Graph:
        if spec.n < 3:
            raise ErroValidacaoGrafo(f"cycle exige n >= 3: {spec.n}")
        return GeradorService._de_networkx(spec.n, nx.cycle_graph(spec.n))

    @staticmethod
    def _hard_dense(spec: GeneratorSpec) -> Graph:
        """
        A = [0, n/2) completo; camada ceil(eps_h * n/2)-regular entre A e B = [n/2, n)

        A camada é circulante: a_i liga-se a B[perm[(i + s) mod n/2]] para
        s < grau, com perm uma permutação de B sorteada pela semente.
        """
        if spec.n % 2:
            raise ErroValidacaoGrafo(f"hard-dense exige n par: {spec.n}")
        metade = spec.n // 2
        grau = math.ceil(spec.eps_h * metade)
        if not 0 <= grau <= metade:
            raise ErroValidacaoGrafo(f"hard-dense inviável: grau {grau} com |B|={metade}")

        arestas = [(u, v) for u in range(metade) for v in range(u + 1, metade)]
        permutacao = np.random.default_rng(spec.seed).permutation(metade)
        for i in range(metade):
            for s in range(grau):
                arestas.append((i, metade + int(permutacao[(i + s) % metade])))
        return Graph.from_edges(spec.n, arestas)
