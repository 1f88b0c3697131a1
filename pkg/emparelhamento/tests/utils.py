"""
Auxiliares dos testes: grafos pequenos, conversão para networkx e estratégias hypothesis
"""
import networkx as nx
from hypothesis import strategies as st

from emparelhamento.services_grafo import Graph


def grafo(n, arestas):
    return Graph.from_edges(n, arestas)


def caminho(n):
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def ciclo(n):
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def completo(n):
    return Graph.from_edges(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def estrela(folhas):
    return Graph.from_edges(folhas + 1, [(0, i) for i in range(1, folhas + 1)])


def emparelhamento_perfeito(pares):
    return Graph.from_edges(2 * pares, [(2 * i, 2 * i + 1) for i in range(pares)])


def de_networkx(g_nx):
    rotulos = {v: i for i, v in enumerate(sorted(g_nx.nodes()))}
    return Graph.from_edges(len(rotulos), sorted(
        (min(rotulos[u], rotulos[v]), max(rotulos[u], rotulos[v])) for u, v in g_nx.edges()
    ))


def para_networkx(g):
    g_nx = nx.Graph()
    g_nx.add_nodes_from(range(g.n))
    g_nx.add_edges_from(g.edges())
    return g_nx


def mu_networkx(g):
    """mu(G) pelo networkx, referência independente de services_exato"""
    return len(nx.max_weight_matching(para_networkx(g), maxcardinality=True))


def aleatorio(n, p, seed):
    return de_networkx(nx.gnp_random_graph(n, p, seed=seed))


def bipartido_aleatorio(n, p, seed):
    esquerda = n // 2
    return de_networkx(nx.bipartite.random_graph(esquerda, n - esquerda, p, seed=seed))


def eh_emparelhamento(g, arestas):
    pontas = [v for aresta in arestas for v in aresta]
    return len(pontas) == len(set(pontas)) and all(g.has_edge(u, v) for u, v in arestas)


@st.composite
def grafos(draw, max_n=12, bipartido=False):
    """Grafo simples aleatório com até max_n vértices"""
    n = draw(st.integers(min_value=1, max_value=max_n))
    pares = [
        (u, v) for u in range(n) for v in range(u + 1, n)
        if not bipartido or (u % 2) != (v % 2)
    ]
    escolhidas = draw(st.lists(st.sampled_from(pares), unique=True)) if pares else []
    return Graph.from_edges(n, escolhidas)
