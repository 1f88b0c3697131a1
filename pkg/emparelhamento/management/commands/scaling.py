"""
Estudo de escala: inclinação de log(sondagens) contra log(n)

Uso:
    python manage.py scaling --family "erdos-renyi:p=8/n" --sizes 500,1000,2000,4000,8000 --trials 3 --csv escala.csv
"""
import json

from django.core.exceptions import ValidationError
from django.core.management.base import BaseCommand, CommandError

from emparelhamento.services_experimentos import RUNNERS, RUNNER_ESTIMADOR, ExperimentoService

EXIT_VALIDACAO = 2
EXIT_IO = 3


class Command(BaseCommand):
    help = 'Ajusta a inclinação log-log do número de sondagens de lista em função de n'

    def add_arguments(self, parser):
        parser.add_argument('--family', required=True, help='Especificação sem n, ex.: "erdos-renyi:p=8/n"')
        parser.add_argument('--sizes', required=True, help='Tamanhos separados por vírgula, estritamente crescentes')
        parser.add_argument('--trials', type=int, default=3)
        parser.add_argument('--csv', dest='csv_path', default=None, help='CSV com uma linha por (n, trial)')
        parser.add_argument('--runner', choices=RUNNERS, default=RUNNER_ESTIMADOR)
        parser.add_argument('--seed', type=int, default=0)
        parser.add_argument('--epsilon', type=float, default=None)
        parser.add_argument('--k', type=int, default=None)
        parser.add_argument('--persistir', action='store_true', help='Grava o relatório no banco')

    def handle(self, *args, **options):
        try:
            sizes = [int(item) for item in options['sizes'].split(',') if item.strip()]
        except ValueError:
            raise CommandError(f"--sizes inválido: {options['sizes']!r}", returncode=EXIT_VALIDACAO)

        try:
            relatorio = ExperimentoService.scaling_study(
                options['family'],
                sizes,
                options['trials'],
                runner=options['runner'],
                seed=options['seed'],
                parametros={'eps': options['epsilon'], 'k': options['k']},
                out_path=options['csv_path'],
            )
        except ValidationError as e:
            raise CommandError(f"Parâmetros inválidos: {'; '.join(e.messages)}", returncode=EXIT_VALIDACAO)
        except OSError as e:
            raise CommandError(f"Erro de E/S: {e}", returncode=EXIT_IO)

        if options['persistir']:
            ExperimentoService.persistir_escala(relatorio, options['csv_path'], options['seed'])

        self.stdout.write(json.dumps({
            'family': relatorio.family,
            'runner': relatorio.runner,
            'sizes': relatorio.sizes,
            'medianas': relatorio.medianas,
            'slope': relatorio.slope,
            'intercept': relatorio.intercept,
            'residuos': relatorio.residuos,
        }, indent=2))
