"""
Estimativa de mu(G) pela linha de comando

Uso:
    python manage.py estimate --gen "erdos-renyi:n=1000,p=8/n" --mode bipartite --trials 3 --csv out.csv
    python manage.py estimate --graph grafo.txt --mode exact --json
"""
import json
from dataclasses import asdict

from django.core.exceptions import ValidationError
from django.core.management.base import BaseCommand, CommandError

from emparelhamento.services_experimentos import MODOS_EXPERIMENTO, ExperimentoService, FonteGrafo
from emparelhamento.services_geradores import GeneratorSpec
from emparelhamento.services_grafo import GrafoService

EXIT_VALIDACAO = 2
EXIT_IO = 3


class Command(BaseCommand):
    help = 'Estima o tamanho do emparelhamento máximo de um grafo (arquivo ou gerador)'

    def add_arguments(self, parser):
        fonte = parser.add_mutually_exclusive_group(required=True)
        fonte.add_argument('--graph', help='Arquivo de lista de arestas ("n m" seguido de m pares)')
        fonte.add_argument('--gen', help='Especificação de gerador, ex.: "random-bipartite:n=500,p=0.02"')

        parser.add_argument('--mode', choices=MODOS_EXPERIMENTO, default='bipartite')
        parser.add_argument('--epsilon', type=float, default=None)
        parser.add_argument('--k', type=int, default=None)
        parser.add_argument('--r', type=int, default=None, help='Amostras por estimativa (padrão ceil(6 ln^3 n))')
        parser.add_argument('--seed', type=int, default=None,
                            help='Semente base; com --gen substitui a seed da especificação')
        parser.add_argument('--trials', type=int, default=1)
        parser.add_argument('--exact-reference', action='store_true',
                            help='Calcula M\', B1 e B2 exatamente em vez de amostrar')

        saida = parser.add_mutually_exclusive_group()
        saida.add_argument('--json', action='store_true', help='Linhas em JSON na saída padrão')
        saida.add_argument('--csv', dest='csv_path', default=None, help='Arquivo CSV de saída')

        parser.add_argument('--sem-tempo', action='store_true',
                            help='Omite wall_time_ms (CSV idêntico entre execuções)')
        parser.add_argument('--persistir', action='store_true', help='Grava a execução no banco')

    def handle(self, *args, **options):
        try:
            fonte = self._fonte(options)
            linhas = ExperimentoService.run_experiment(
                [fonte],
                [options['mode']],
                options['trials'],
                out_path=options['csv_path'],
                parametros={
                    'eps': options['epsilon'],
                    'k': options['k'],
                    'r': options['r'],
                    'exact_reference': options['exact_reference'] or None,
                },
                registrar_tempo=not options['sem_tempo'],
                persistir=options['persistir'],
                comando='ESTIMATE',
            )
        except ValidationError as e:
            raise CommandError(f"Parâmetros inválidos: {'; '.join(e.messages)}", returncode=EXIT_VALIDACAO)
        except OSError as e:
            raise CommandError(f"Erro de E/S: {e}", returncode=EXIT_IO)

        if options['json']:
            self.stdout.write(json.dumps([asdict(linha) for linha in linhas], indent=2))
            return

        for linha in linhas:
            if linha.erro:
                self.stdout.write(self.style.ERROR(f"seed={linha.seed} [{linha.mode}] {linha.erro}"))
                continue
            referencia = f" mu={linha.exact_mu} razão={linha.ratio:.4f}" if linha.ratio is not None else ''
            self.stdout.write(
                f"seed={linha.seed} [{linha.mode}] estimativa={linha.estimate:.3f}{referencia} "
                f"sondagens={linha.list_probes or 0}+{linha.matrix_probes or 0}"
            )
        if options['csv_path']:
            self.stdout.write(self.style.SUCCESS(f"{len(linhas)} linhas gravadas em {options['csv_path']}"))

    @staticmethod
    def _fonte(options) -> FonteGrafo:
        if options['gen']:
            spec = GeneratorSpec.parse(options['gen'], seed=options['seed'])
            return FonteGrafo.de_spec(spec)
        with open(options['graph'], encoding='utf-8') as arquivo:
            g = GrafoService.load_graph(arquivo.read())
        return FonteGrafo(rotulo=f"file:{options['graph']}", grafo=g, seed=options['seed'] or 0)
