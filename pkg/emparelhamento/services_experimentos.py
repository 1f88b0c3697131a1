"""
Execução de experimentos e estudo de escala de sondagens
"""
import csv
import io
import time
from dataclasses import asdict, dataclass, fields
from statistics import median
from typing import Any, Dict, List, Optional, Sequence, Union

import numpy as np
from django.conf import settings
from django.core.exceptions import ValidationError
from django.db import transaction

from comum.utilitarios.logs import registrar_log

from .excecoes import (
    ErroExaustaoAmostragem, ErroPontosInsuficientes, ErroRankingDuplicado, ErroValidacaoGrafo,
)
from .models import ExecucaoExperimento, LinhaExperimento
from .models_config import ConfiguracaoBenchmark
from .services import MODOS, EstimadorService, EstimatorConfig, semente64
from .services_esparsificacao import EsparsificacaoService, SparsifierConfig
from .services_exato import ExatoService
from .services_geradores import GeneratorSpec, GeradorService
from .services_grafo import Graph

MODO_TWOPASS = 'twopass'
MODO_EXATO = 'exact'
MODOS_EXPERIMENTO = MODOS + (MODO_TWOPASS, MODO_EXATO)

RUNNER_ESTIMADOR = 'estimador'
RUNNER_ESPARSIFICACAO = 'esparsificacao'
RUNNER_CONSTANTE = 'constante'
RUNNERS = (RUNNER_ESTIMADOR, RUNNER_ESPARSIFICACAO, RUNNER_CONSTANTE)
SONDAGENS_CONSTANTE = 1000


@dataclass
class ExperimentRow:
    generator: str
    n: int
    seed: int
    mode: str
    estimate: Optional[float] = None
    exact_mu: Optional[int] = None
    ratio: Optional[float] = None
    list_probes: Optional[int] = None
    matrix_probes: Optional[int] = None
    wall_time_ms: Optional[float] = None
    erro: str = ''

    @classmethod
    def cabecalho(cls) -> List[str]:
        return [campo.name for campo in fields(cls)]

    def valores(self) -> List[str]:
        return ['' if valor is None else str(valor) for valor in asdict(self).values()]


@dataclass
class FonteGrafo:
    """Grafo já construído, com o rótulo que vai para a coluna generator"""
    rotulo: str
    grafo: Graph
    seed: int = 0

    @classmethod
    def de_spec(cls, spec: GeneratorSpec) -> 'FonteGrafo':
        return cls(rotulo=spec.to_string(), grafo=GeradorService.generate(spec), seed=spec.seed)


@dataclass
class RelatorioEscala:
    family: str
    runner: str
    sizes: List[int]
    medianas: List[float]
    slope: float
    intercept: float
    residuos: List[float]
    pontos: List[Dict[str, Any]]

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def escrever_csv(cabecalho: Sequence[str], linhas: Sequence[Sequence[str]], destino) -> None:
    """CSV RFC-4180: separador vírgula, aspas mínimas, CRLF"""
    escritor = csv.writer(destino, quoting=csv.QUOTE_MINIMAL, lineterminator='\r\n')
    escritor.writerow(cabecalho)
    escritor.writerows(linhas)


class ExperimentoService:
    """
    Experimentos reprodutíveis sobre as famílias de geradores
    """

    ERROS_DE_LINHA = (ValidationError, ErroExaustaoAmostragem, ErroRankingDuplicado, ValueError)

    @staticmethod
    def semente_trial(seed: int, trial: int) -> int:
        return semente64(np.random.SeedSequence([seed, trial])) >> 1

    @staticmethod
    def limite_exato(bipartido: bool) -> int:
        padroes = settings.EMPARELHAMENTO
        if bipartido:
            return int(ConfiguracaoBenchmark.get_config(
                'EXACT_CAP_BIPARTIDO', padroes.get('EXACT_CAP_BIPARTIDO', 5000)))
        return int(ConfiguracaoBenchmark.get_config(
            'EXACT_CAP_GERAL', padroes.get('EXACT_CAP_GERAL', 2000)))

    @staticmethod
    def mu_exato(g: Graph) -> Optional[int]:
        """mu(G) quando n cabe no limite da família (bipartido ou geral); None acima dele"""
        bipartido = ExatoService.colorir_bipartido(g) is not None
        if g.n > ExperimentoService.limite_exato(bipartido):
            return None
        return len(ExatoService.exact_max_matching(g))

    @staticmethod
    def _executar_linha(g: Graph, rotulo: str, modo: str, semente: int,
                        parametros: Dict[str, Any], mu: Optional[int], registrar_tempo: bool) -> ExperimentRow:
        linha = ExperimentRow(generator=rotulo, n=g.n, seed=semente, mode=modo, exact_mu=mu)
        inicio = time.perf_counter()
        try:
            if modo == MODO_EXATO:
                linha.estimate = float(len(ExatoService.exact_max_matching(g)))
            elif modo == MODO_TWOPASS:
                arestas = list(g.edges())
                ordem = np.random.default_rng(semente).permutation(len(arestas))
                linha.estimate = ExatoService.two_pass_streaming(
                    [arestas[i] for i in ordem], parametros.get('eps') or 0.05, parametros.get('k'))
            else:
                cfg = EstimatorConfig.padrao(mode=modo, **parametros)
                relatorio = EstimadorService.estimar(g, cfg, semente)
                linha.estimate = relatorio.estimate
                linha.list_probes = relatorio.probes['list_probes']
                linha.matrix_probes = relatorio.probes['matrix_probes']
        except ExperimentoService.ERROS_DE_LINHA as e:
            linha.erro = f"{type(e).__name__}: {e}"
            registrar_log('emparelhamento.experimentos',
                          f"Falha em {linha.generator} [{modo}] seed={semente}: {linha.erro}", nivel='ERROR')

        if registrar_tempo:
            linha.wall_time_ms = round((time.perf_counter() - inicio) * 1000, 3)
        if linha.estimate is not None and mu:
            linha.ratio = linha.estimate / mu
        return linha

    @staticmethod
    def run_experiment(specs: Sequence[Union[GeneratorSpec, FonteGrafo]], modes: Sequence[str], trials: int,
                       out_path: Optional[str] = None, parametros: Optional[Dict[str, Any]] = None,
                       registrar_tempo: bool = True, persistir: bool = False,
                       comando: str = 'ESTIMATE') -> List[ExperimentRow]:
        """
        Uma linha por (spec, modo, trial), em ordem determinística

        Args:
            specs: especificações de geradores ou FonteGrafo já carregados
            modes: modos do estimador, 'twopass' ou 'exact'
            trials: repetições por (spec, modo)
            out_path: CSV de saída (opcional)
            parametros: eps, k, r, c, exact_reference repassados ao EstimatorConfig
            registrar_tempo: preenche wall_time_ms; False deixa o CSV idêntico entre execuções
            persistir: grava ExecucaoExperimento e LinhaExperimento

        Returns:
            Lista de ExperimentRow; falhas por linha ficam na coluna erro

        Raises:
            OSError: out_path não gravável
        """
        if trials < 1:
            raise ErroValidacaoGrafo(f"trials deve ser >= 1: {trials}")
        invalidos = [modo for modo in modes if modo not in MODOS_EXPERIMENTO]
        if invalidos:
            raise ErroValidacaoGrafo(f"Modos inválidos: {invalidos}")
        parametros = {chave: valor for chave, valor in (parametros or {}).items() if valor is not None}

        linhas: List[ExperimentRow] = []
        fontes = [FonteGrafo.de_spec(spec) if isinstance(spec, GeneratorSpec) else spec for spec in specs]
        for fonte in fontes:
            mu = ExperimentoService.mu_exato(fonte.grafo)
            for modo in modes:
                for trial in range(trials):
                    semente = ExperimentoService.semente_trial(fonte.seed, trial)
                    linhas.append(ExperimentoService._executar_linha(
                        fonte.grafo, fonte.rotulo, modo, semente, parametros, mu, registrar_tempo))

        if out_path:
            with open(out_path, 'w', newline='', encoding='utf-8') as destino:
                escrever_csv(ExperimentRow.cabecalho(), [linha.valores() for linha in linhas], destino)

        erros = sum(1 for linha in linhas if linha.erro)
        registrar_log('emparelhamento.experimentos',
                      f"{len(linhas)} linhas ({erros} com erro) de {len(specs)} specs x {len(modes)} modos")

        if persistir:
            ExperimentoService.persistir(linhas, comando, {
                'specs': [fonte.rotulo for fonte in fontes],
                'modes': list(modes),
                'trials': trials,
                **parametros,
            }, out_path)
        return linhas

    @staticmethod
    @transaction.atomic
    def persistir(linhas: Sequence[ExperimentRow], comando: str, parametros: Dict[str, Any],
                  caminho_csv: Optional[str] = None, seed: int = 0) -> ExecucaoExperimento:
        execucao = ExecucaoExperimento.objects.create(
            comando=comando,
            parametros=parametros,
            seed=seed,
            caminho_csv=caminho_csv or '',
            total_linhas=len(linhas),
            total_erros=sum(1 for linha in linhas if linha.erro),
        )
        LinhaExperimento.objects.bulk_create([
            LinhaExperimento(
                execucao=execucao,
                ordem=ordem,
                gerador=linha.generator,
                n=linha.n,
                seed=linha.seed,
                modo=linha.mode,
                estimativa=linha.estimate,
                mu_exato=linha.exact_mu,
                razao=linha.ratio,
                list_probes=linha.list_probes,
                matrix_probes=linha.matrix_probes,
                tempo_ms=linha.wall_time_ms,
                erro=linha.erro,
            )
            for ordem, linha in enumerate(linhas)
        ])
        return execucao

    @staticmethod
    def persistir_escala(relatorio: 'RelatorioEscala', caminho_csv: Optional[str] = None,
                         seed: int = 0) -> ExecucaoExperimento:
        return ExecucaoExperimento.objects.create(
            comando='SCALING',
            parametros=relatorio.to_dict(),
            seed=seed,
            caminho_csv=caminho_csv or '',
            total_linhas=len(relatorio.pontos),
        )

    @staticmethod
    def _sondagens(runner: str, g: Graph, semente: int, parametros: Dict[str, Any]) -> int:
        if runner == RUNNER_CONSTANTE:
            return SONDAGENS_CONSTANTE
        if runner == RUNNER_ESPARSIFICACAO:
            instrumentado = g.instrumentado()
            EsparsificacaoService.sparsify(instrumentado, SparsifierConfig.padrao(g.n), semente)
            return instrumentado.stats.list_probes_total
        cfg = EstimatorConfig.padrao(**parametros)
        return EstimadorService.estimate_bipartite(g, cfg, semente).probes['list_probes']

    @staticmethod
    def scaling_study(family: str, sizes: Sequence[int], trials: int, runner: str = RUNNER_ESTIMADOR,
                      seed: int = 0, parametros: Optional[Dict[str, Any]] = None,
                      out_path: Optional[str] = None) -> RelatorioEscala:
        """
        Inclinação de log(sondagens de lista) contra log(n)

        Mediana por n sobre os trials; ajuste linear por mínimos quadrados.

        Args:
            family: especificação sem n (ex.: "erdos-renyi:p=8/n")
            sizes: tamanhos estritamente crescentes, ao menos 4
            trials: repetições por tamanho
            runner: 'estimador', 'esparsificacao' ou 'constante'
            seed: semente base
            parametros: repassados ao EstimatorConfig do runner 'estimador'
            out_path: CSV com uma linha por (n, trial)

        Raises:
            ErroPontosInsuficientes: menos de 4 tamanhos ou fora de ordem
        """
        sizes = list(sizes)
        if len(sizes) < 4 or any(a >= b for a, b in zip(sizes, sizes[1:])):
            raise ErroPontosInsuficientes(
                f"Estudo de escala exige >= 4 tamanhos estritamente crescentes: {sizes}"
            )
        if runner not in RUNNERS:
            raise ErroValidacaoGrafo(f"Runner desconhecido: {runner!r} (válidos: {', '.join(RUNNERS)})")
        if trials < 1:
            raise ErroValidacaoGrafo(f"trials deve ser >= 1: {trials}")
        parametros = {chave: valor for chave, valor in (parametros or {}).items() if valor is not None}

        pontos: List[Dict[str, Any]] = []
        medianas: List[float] = []
        for n in sizes:
            sondagens = []
            for trial in range(trials):
                semente = ExperimentoService.semente_trial(seed + n, trial)
                spec = GeneratorSpec.parse(family, n=n, seed=semente)
                g = GeradorService.generate(spec)
                total = ExperimentoService._sondagens(runner, g, semente, parametros)
                sondagens.append(total)
                pontos.append({'n': n, 'trial': trial, 'seed': semente, 'list_probes': total})
            medianas.append(float(median(sondagens)))

        x = np.log(np.asarray(sizes, dtype=float))
        y = np.log(np.maximum(np.asarray(medianas), 1.0))
        slope, intercept = np.polyfit(x, y, 1)
        residuos = (y - (slope * x + intercept)).tolist()

        if out_path:
            with open(out_path, 'w', newline='', encoding='utf-8') as destino:
                escrever_csv(['n', 'trial', 'seed', 'list_probes'],
                             [[str(p['n']), str(p['trial']), str(p['seed']), str(p['list_probes'])]
                              for p in pontos], destino)

        registrar_log('emparelhamento.experimentos',
                      f"Escala {family} [{runner}]: slope={slope:.3f} sobre {sizes}")
        return RelatorioEscala(
            family=family,
            runner=runner,
            sizes=sizes,
            medianas=medianas,
            slope=float(slope),
            intercept=float(intercept),
            residuos=[float(r) for r in residuos],
            pontos=pontos,
        )

    @staticmethod
    def linhas_para_csv(linhas: Sequence[ExperimentRow]) -> str:
        destino = io.StringIO()
        escrever_csv(ExperimentRow.cabecalho(), [linha.valores() for linha in linhas], destino)
        return destino.getvalue()
