"""
Erros do domínio de emparelhamento
"""
from django.core.exceptions import ValidationError


class ErroValidacaoGrafo(ValidationError):
    """Entrada estruturalmente inválida: laço, id fora da faixa, aresta duplicada, parâmetro inviável"""


class ErroFormatoGrafo(ErroValidacaoGrafo):
    """Texto de lista de arestas malformado"""


class ErroGrafoNaoBipartido(ErroValidacaoGrafo):
    """Algoritmo exige grafo bipartido e encontrou ciclo ímpar"""


class ErroPontosInsuficientes(ErroValidacaoGrafo):
    """Estudo de escala com menos de 4 tamanhos ou tamanhos fora de ordem"""


class ErroExaustaoAmostragem(RuntimeError):
    """
    Amostragem por rejeição atingiu o limite de sondagens

    Indica que o vértice não possui vizinho dentro da visão consultada.
    """

    def __init__(self, vertice, tentativas):
        self.vertice = vertice
        self.tentativas = tentativas
        super().__init__(
            f"Nenhum vizinho válido para o vértice {vertice} após {tentativas} sondagens"
        )


class ErroRankingDuplicado(RuntimeError):
    """Duas arestas distintas receberam o mesmo rank"""

    def __init__(self, aresta_a, aresta_b):
        self.arestas = (aresta_a, aresta_b)
        super().__init__(f"Ranks iguais para as arestas {aresta_a} e {aresta_b}")


class ErroInstancias(RuntimeError):
    """Todas as instâncias paralelas do estimador falharam"""

    def __init__(self, causas):
        self.causas = list(causas)
        resumo = "; ".join(str(c) for c in self.causas)
        super().__init__(f"{len(self.causas)} instâncias falharam: {resumo}")
