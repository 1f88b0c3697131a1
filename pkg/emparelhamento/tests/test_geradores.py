from django.test import SimpleTestCase

from emparelhamento.excecoes import ErroValidacaoGrafo
from emparelhamento.services_exato import ExatoService
from emparelhamento.services_geradores import GeneratorSpec, GeradorService

from .utils import mu_networkx


class GeneratorSpecTests(SimpleTestCase):

    def test_parse_com_p_relativo_a_n(self):
        spec = GeneratorSpec.parse('erdos-renyi:n=1000,p=8/n,seed=3')
        self.assertEqual((spec.family, spec.n, spec.seed), ('erdos-renyi', 1000, 3))
        self.assertAlmostEqual(spec.p, 0.008)
        self.assertEqual(spec.to_string(), 'erdos-renyi:n=1000,p=8/n,seed=3')

    def test_sobrepor_n_e_seed(self):
        spec = GeneratorSpec.parse('random-bipartite:n=10,p=4/n', n=200, seed=9)
        self.assertEqual(spec.n, 200)
        self.assertEqual(spec.seed, 9)
        self.assertAlmostEqual(spec.p, 0.02)

    def test_especificacoes_invalidas(self):
        for texto in ('tree:n=10', 'erdos-renyi:n=10', 'd-regular:n=10,d=x', 'star:p=0.1',
                      'star:n=5,cor=azul', 'erdos-renyi:n=10,p=2', 'star:n=5,seed'):
            with self.subTest(texto=texto):
                with self.assertRaises(ErroValidacaoGrafo):
                    GeneratorSpec.parse(texto)


class GenerateTests(SimpleTestCase):

    def test_emparelhamento_disjunto(self):
        g = GeradorService.generate(GeneratorSpec(family='disjoint-matching', n=10))
        self.assertEqual(g.m, 5)
        self.assertEqual(len(ExatoService.exact_max_matching(g)), 5)

    def test_densa_dificil(self):
        n = 200
        g = GeradorService.generate(GeneratorSpec(family='hard-dense', n=n, eps_h=0.1, seed=4))
        metade = n // 2
        self.assertEqual({g.degree(v) for v in range(metade)}, {metade - 1 + 10})
        self.assertEqual({g.degree(v) for v in range(metade, n)}, {10})
        self.assertFalse(any(g.has_edge(u, v) for u in range(metade, n) for v in range(u + 1, n)))
        self.assertEqual(mu_networkx(g), metade)

    def test_d_regular_deterministico(self):
        spec = GeneratorSpec(family='d-regular', n=8, d=3, seed=5)
        a, b = GeradorService.generate(spec), GeradorService.generate(spec)
        self.assertEqual(list(a.edges()), list(b.edges()))
        self.assertEqual({a.degree(v) for v in range(8)}, {3})

    def test_parametros_inviaveis(self):
        casos = [
            GeneratorSpec(family='d-regular', n=7, d=3),
            GeneratorSpec(family='disjoint-matching', n=9),
            GeneratorSpec(family='hard-dense', n=11, eps_h=0.1),
            GeneratorSpec(family='cycle', n=2),
        ]
        for spec in casos:
            with self.subTest(spec=spec.to_string()):
                with self.assertRaises(ErroValidacaoGrafo):
                    GeradorService.generate(spec)

    def test_bipartido_aleatorio_e_bipartido(self):
        g = GeradorService.generate(GeneratorSpec(family='random-bipartite', n=60, p=0.1, seed=2))
        self.assertIsNotNone(ExatoService.colorir_bipartido(g))
        self.assertTrue(all(u < 30 <= v for u, v in g.edges()))

    def test_mu_acima_do_limite_por_graus(self):
        specs = [
            GeneratorSpec.parse('erdos-renyi:n=300,p=8/n,seed=1'),
            GeneratorSpec.parse('random-bipartite:n=300,p=4/n,seed=2'),
            GeneratorSpec.parse('d-regular:n=100,d=4,seed=3'),
            GeneratorSpec.parse('star:n=50'),
            GeneratorSpec.parse('path:n=51'),
            GeneratorSpec.parse('cycle:n=51'),
        ]
        for spec in specs:
            g = GeradorService.generate(spec)
            with self.subTest(spec=spec.to_string()):
                self.assertGreaterEqual(mu_networkx(g) + 1e-9, ExatoService.mu_lower_bound_by_degrees(g))
