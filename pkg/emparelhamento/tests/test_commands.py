import json
import os
import tempfile
from io import StringIO

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import TestCase

from emparelhamento.models import ExecucaoExperimento


class EstimateCommandTests(TestCase):

    def setUp(self):
        self.diretorio = tempfile.TemporaryDirectory()
        self.addCleanup(self.diretorio.cleanup)

    def _executar(self, *args):
        saida = StringIO()
        call_command('estimate', *args, stdout=saida)
        return saida.getvalue()

    def _arquivo(self, nome, conteudo):
        caminho = os.path.join(self.diretorio.name, nome)
        with open(caminho, 'w', encoding='utf-8') as arquivo:
            arquivo.write(conteudo)
        return caminho

    def test_gerador_em_json(self):
        saida = self._executar('--gen', 'disjoint-matching:n=20', '--mode', 'bipartite', '--k', '3',
                               '--exact-reference', '--trials', '2', '--seed', '4', '--json')
        linhas = json.loads(saida)
        self.assertEqual(len(linhas), 2)
        for linha in linhas:
            self.assertEqual(linha['generator'], 'disjoint-matching:n=20,seed=4')
            self.assertEqual(linha['estimate'], 10.0)
            self.assertEqual(linha['exact_mu'], 10)

    def test_arquivo_no_modo_exato(self):
        caminho = self._arquivo('p4.txt', '4 3\n0 1\n1 2\n2 3\n')
        saida = self._executar('--graph', caminho, '--mode', 'exact')
        self.assertIn('estimativa=2.000', saida)

    def test_csv_gravado(self):
        destino = os.path.join(self.diretorio.name, 'saida.csv')
        self._executar('--gen', 'star:n=15', '--mode', 'twopass', '--trials', '3', '--csv', destino,
                       '--sem-tempo', '--persistir')
        with open(destino, encoding='utf-8') as arquivo:
            self.assertEqual(len(arquivo.read().splitlines()), 4)
        self.assertEqual(ExecucaoExperimento.objects.get().total_linhas, 3)

    def test_parametro_invalido_vira_erro_de_linha(self):
        linhas = json.loads(self._executar('--gen', 'star:n=10', '--epsilon', '2', '--json'))
        self.assertTrue(linhas[0]['erro'].startswith('ErroValidacaoGrafo'))
        self.assertIsNone(linhas[0]['estimate'])

    def test_erro_de_validacao_sai_com_2(self):
        casos = [
            ('--gen', 'tree:n=10'),
            ('--gen', 'star:n=10', '--trials', '0'),
            ('--graph', self._arquivo('ruim.txt', '3 1\n0 0\n')),
        ]
        for args in casos:
            with self.subTest(args=args):
                with self.assertRaises(CommandError) as ctx:
                    self._executar(*args)
                self.assertEqual(ctx.exception.returncode, 2)

    def test_erro_de_arquivo_sai_com_3(self):
        with self.assertRaises(CommandError) as ctx:
            self._executar('--graph', os.path.join(self.diretorio.name, 'inexistente.txt'))
        self.assertEqual(ctx.exception.returncode, 3)

        with self.assertRaises(CommandError) as ctx:
            self._executar('--gen', 'star:n=5', '--mode', 'exact',
                           '--csv', os.path.join(self.diretorio.name, 'sem', 'pasta.csv'))
        self.assertEqual(ctx.exception.returncode, 3)


class ScalingCommandTests(TestCase):

    def test_relatorio_em_json(self):
        saida = StringIO()
        call_command('scaling', '--family', 'path', '--sizes', '10,20,40,80', '--trials', '1',
                     '--runner', 'constante', '--persistir', stdout=saida)
        relatorio = json.loads(saida.getvalue())
        self.assertEqual(relatorio['sizes'], [10, 20, 40, 80])
        self.assertAlmostEqual(relatorio['slope'], 0.0, delta=0.05)
        self.assertEqual(ExecucaoExperimento.objects.get().comando, 'SCALING')

    def test_tamanhos_invalidos(self):
        for tamanhos in ('10,vinte,40,80', '10,20,40'):
            with self.subTest(tamanhos=tamanhos):
                with self.assertRaises(CommandError) as ctx:
                    call_command('scaling', '--family', 'path', '--sizes', tamanhos, stdout=StringIO())
                self.assertEqual(ctx.exception.returncode, 2)
