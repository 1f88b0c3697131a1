import json
import math
from unittest import mock

import numpy as np
from django.test import SimpleTestCase, override_settings

from emparelhamento.excecoes import (
    ErroExaustaoAmostragem, ErroGrafoNaoBipartido, ErroInstancias, ErroRankingDuplicado, ErroValidacaoGrafo,
)
from emparelhamento.services import (
    MODO_GERAL, MODO_MATRIZ, MODO_MULTIPLICATIVO, EstimadorService, EstimateReport, EstimatorConfig, semente64,
)
from emparelhamento.services_esparsificacao import EsparsificacaoService, SparsifierConfig
from emparelhamento.services_exato import ApproxConstants, ExatoService, Matching
from emparelhamento.services_geradores import GeneratorSpec, GeradorService
from emparelhamento.services_grafo import Graph, GrafoService
from emparelhamento.services_rgmm import splitmix64
from emparelhamento.services_visoes import MatrixToListView
from emparelhamento.tasks import executar_instancia

from .utils import aleatorio, bipartido_aleatorio, caminho, ciclo, emparelhamento_perfeito, mu_networkx

B = ApproxConstants.B


def limite_superior(mu, k):
    kb = k * B
    return mu * (1 + (math.ceil(kb) - kb) / kb) + 1e-9


class EstimatorConfigTests(SimpleTestCase):

    def test_k_derivado_de_epsilon(self):
        self.assertEqual(EstimatorConfig(eps=0.1).k, 415)
        self.assertEqual(EstimatorConfig(eps=0.1, k=7).k, 7)

    def test_amostras(self):
        cfg = EstimatorConfig(k=3)
        self.assertEqual(cfg.amostras(100), math.ceil(6 * math.log(100) ** 3))
        self.assertEqual(EstimatorConfig(k=3, r=17).amostras(100), 17)

    def test_largura_e_kb(self):
        cfg = EstimatorConfig(k=3)
        self.assertAlmostEqual(cfg.kb, 3 * B)
        self.assertEqual(cfg.kb_inteiro, 8)
        self.assertEqual(cfg.largura, 8)

    def test_validacao(self):
        for parametros in ({'eps': 0}, {'eps': 1.5}, {'k': 0}, {'r': 0}, {'mode': 'quantum'}):
            with self.subTest(**parametros):
                with self.assertRaises(ErroValidacaoGrafo):
                    EstimatorConfig(**parametros)

    def test_padrao_ignora_none(self):
        cfg = EstimatorConfig.padrao(k=None, mode=MODO_GERAL, eps=0.2)
        self.assertEqual(cfg.mode, MODO_GERAL)
        self.assertEqual(cfg.k, ApproxConstants.k_para_epsilon(0.2))

    def test_dict_preserva_configuracao(self):
        cfg = EstimatorConfig(eps=0.2, k=5, r=9, mode=MODO_MULTIPLICATIVO, exact_reference=True, c=4)
        self.assertEqual(EstimatorConfig.from_dict(cfg.to_dict()), cfg)


class EstimateBipartiteTests(SimpleTestCase):

    def test_caminho_p5_com_m_forcado(self):
        g = caminho(5)
        cfg = EstimatorConfig(k=3, exact_reference=True)
        relatorio = EstimadorService.estimate_bipartite(g, cfg, seed=1, M=Matching([(1, 2)]))
        self.assertAlmostEqual(relatorio.mu1, 1 + (1 - 1 / B), places=9)
        self.assertAlmostEqual(relatorio.mu2, (1 - 1 / B) + 2 * 3 / (3 * B), places=9)
        self.assertAlmostEqual(relatorio.estimate, 1.5858, places=4)
        self.assertGreaterEqual(relatorio.estimate, ApproxConstants.GAMMA * 2)
        self.assertEqual(relatorio.M_size, 1)

    def test_emparelhamento_perfeito(self):
        g = emparelhamento_perfeito(10)
        relatorio = EstimadorService.estimate_bipartite(g, EstimatorConfig(k=3, r=40), seed=2)
        self.assertEqual(relatorio.M_size, 10)
        self.assertAlmostEqual(relatorio.mu1, 10.0)
        self.assertAlmostEqual(relatorio.estimate, 10.0)
        self.assertEqual(relatorio.sample['X'], 0)
        self.assertEqual(relatorio.sample['Z'], 0)

    def test_grafo_vazio(self):
        relatorio = EstimadorService.estimate_bipartite(Graph.from_edges(8, []), EstimatorConfig(k=3, r=20), seed=0)
        self.assertEqual(relatorio.estimate, 0.0)
        self.assertEqual(relatorio.M_size, 0)

    def test_relatorio(self):
        g = bipartido_aleatorio(40, 0.1, seed=1)
        relatorio = EstimadorService.estimate_bipartite(g, EstimatorConfig(k=3, r=60), seed=5)
        self.assertEqual(relatorio.estimate, max(relatorio.mu1, relatorio.mu2))
        self.assertGreaterEqual(relatorio.estimate, 0)
        self.assertLessEqual(relatorio.estimate, g.n / 2)
        self.assertGreater(relatorio.probes['list_probes'], 0)
        self.assertEqual(relatorio.probes['matrix_probes'], 0)
        self.assertEqual(relatorio.seed, 5)
        self.assertEqual(relatorio.config['k'], 3)
        dados = json.loads(json.dumps(relatorio.to_dict()))
        self.assertEqual(dados['estimate'], relatorio.estimate)

    def test_deterministico_por_semente(self):
        g = bipartido_aleatorio(30, 0.15, seed=4)
        cfg = EstimatorConfig(k=2, r=50)
        a = EstimadorService.estimate_bipartite(g, cfg, seed=11)
        b = EstimadorService.estimate_bipartite(g, cfg, seed=11)
        self.assertEqual((a.estimate, a.probes), (b.estimate, b.probes))

    def test_referencia_exata_rejeita_ciclo_impar(self):
        with self.assertRaises(ErroGrafoNaoBipartido):
            EstimadorService.estimate_bipartite(ciclo(5), EstimatorConfig(k=3, exact_reference=True), seed=0)

    def test_m_forcado_com_aresta_inexistente(self):
        with self.assertRaises(ErroValidacaoGrafo):
            EstimadorService.estimate_bipartite(caminho(4), EstimatorConfig(k=3), seed=0, M=Matching([(0, 2)]))

    def test_configuracao_padrao_em_grafos_pequenos(self):
        """eps = 0.05 dá k = 3314 e kb = 8001 cópias; o custo dos oráculos B não depende delas"""
        cfg = EstimatorConfig()
        self.assertEqual(cfg.k, ApproxConstants.k_para_epsilon(0.05))

        g = bipartido_aleatorio(20, 0.4, seed=1)
        relatorio = EstimadorService.estimate_bipartite(g, cfg, seed=0)
        self.assertGreaterEqual(relatorio.estimate, 0)
        self.assertLessEqual(relatorio.estimate, mu_networkx(g))
        self.assertLess(relatorio.probes['list_probes'], 100 * g.n ** 2)

        g = GeradorService.generate(GeneratorSpec(family='erdos-renyi', n=20, p=0.4, seed=1))
        relatorio = EstimadorService.estimate_bipartite(g, cfg, seed=0)
        self.assertLessEqual(relatorio.estimate, g.n / 2)
        self.assertLess(relatorio.probes['list_probes'], 100 * g.n ** 2)


class CasosAmostraisTests(SimpleTestCase):

    def test_caso1_sem_vertices_livres(self):
        g = emparelhamento_perfeito(6)
        M = Matching(g.edges())
        mu_mp, mu_b1 = EstimadorService.case1_sample(g, M, EstimatorConfig(k=3, r=30), seed=0)
        self.assertAlmostEqual(mu_mp, -g.n / (2 * math.log(g.n)))
        self.assertLess(mu_b1, 0)

    def test_caso2_aresta_unica_emparelhada(self):
        g = Graph.from_edges(2, [(0, 1)])
        cfg = EstimatorConfig(k=3, r=30)
        mu_b2 = EstimadorService.case2_sample(g, Matching([(0, 1)]), cfg, seed=0)
        self.assertAlmostEqual(mu_b2, -(g.n * cfg.largura) / (2 * math.log(2)))

    def test_caso2_grafo_vazio(self):
        g = Graph.from_edges(5, [])
        cfg = EstimatorConfig(k=3, r=30)
        mu_b2 = EstimadorService.case2_sample(g, Matching(), cfg, seed=0)
        self.assertAlmostEqual(mu_b2, -(g.n * cfg.largura) / (2 * math.log(5)))

    def test_referencia_exata_devolve_tamanhos(self):
        g = bipartido_aleatorio(20, 0.2, seed=3)
        cfg = EstimatorConfig(k=3, exact_reference=True)
        exatos = EstimadorService.componentes_exatos(g, cfg, seed=4)
        M = exatos['M']
        self.assertEqual(EstimadorService.case1_sample(g, M, cfg, seed=4),
                         (float(len(exatos['Mp'])), float(len(exatos['B1']))))
        self.assertEqual(EstimadorService.case2_sample(g, M, cfg, seed=4), float(len(exatos['B2'])))

    def test_oraculos_reproduzem_componentes_exatos(self):
        for seed in range(5):
            g = bipartido_aleatorio(24, 0.2, seed=seed)
            cfg = EstimatorConfig(k=2)
            ctx = EstimadorService._preparar_lista(g, cfg, seed, None)
            exatos = EstimadorService._componentes_exatos(ctx)

            livre = ctx.oraculo_livre()
            emparelhados = sum(1 for v in range(g.n) if livre.vertex_matched(v).matched)
            self.assertEqual(emparelhados, 2 * len(exatos['Mp']))

            for oraculo, chave in ((ctx.oraculo_b1(), 'B1'), (ctx.oraculo_b2(), 'B2')):
                visao = oraculo.visao
                carga = [0] * g.n
                for x in range(ctx.vagas):
                    if oraculo.vertex_matched(x).matched:
                        carga[visao.vertice_base(x)] += 1
                self.assertEqual(carga, [exatos[chave].load[v] for v in range(g.n)])
                for v in range(g.n):
                    lado = visao.lado(v)
                    capacidade = 0 if lado is None else visao.copias[lado]
                    self.assertLessEqual(carga[v], capacidade)
                for u, v in g.edges():
                    lu, lv = visao.lado(u), visao.lado(v)
                    if lu is None or lv is None or lu == lv:
                        continue
                    self.assertFalse(carga[u] < visao.copias[lu] and carga[v] < visao.copias[lv])

    def test_estado_dos_oraculos_por_vertice_base(self):
        n = 60
        g = GeradorService.generate(GeneratorSpec(family='erdos-renyi', n=n, p=8 / n, seed=2))
        cfg = EstimatorConfig()
        ctx = EstimadorService._preparar_lista(g, cfg, 3, None)
        EstimadorService._caso1(ctx, cfg.amostras(n))
        EstimadorService._caso2(ctx, cfg.amostras(n))
        self.assertLessEqual(len(ctx.oraculo_livre()._listas), n)
        for oraculo in (ctx.oraculo_b1(), ctx.oraculo_b2()):
            self.assertLessEqual(len(oraculo._incidencias), n)
            self.assertLessEqual(len(oraculo._multiplicidades), g.m)


class GarantiaBipartidaTests(SimpleTestCase):
    """Desigualdades determinísticas do modo exact_reference em bipartidos aleatórios"""

    def _instancias(self, quantidade, seed):
        rng = np.random.default_rng(seed)
        for i in range(quantidade):
            n = int(rng.integers(6, 61))
            p = float(rng.uniform(1, 5)) / n
            yield i, bipartido_aleatorio(n, min(p, 1.0), seed=int(rng.integers(0, 2 ** 31)))

    def test_formulas_abaixo_de_mu(self):
        k = 10
        cfg = EstimatorConfig(k=k, exact_reference=True)
        for i, g in self._instancias(500, 1):
            exatos = EstimadorService.componentes_exatos(g, cfg, seed=i)
            relatorio = ExatoService.check_fractional_bound(
                exatos['M'], exatos['Mp'], exatos['B1'], exatos['B2'], g, k)
            with self.subTest(i=i, n=g.n):
                self.assertFalse(relatorio.violacao)

    def test_entre_limites(self):
        k = 100
        cfg = EstimatorConfig(k=k, exact_reference=True)
        garantia = ApproxConstants.GAMMA - 5 * ApproxConstants.epsilon_de_k(k)
        avaliadas = 0
        for i, g in self._instancias(500, 2):
            mu = mu_networkx(g)
            if mu < 3:
                continue
            avaliadas += 1
            estimativa = EstimadorService.estimate_bipartite(g, cfg, seed=i).estimate
            with self.subTest(i=i, n=g.n, mu=mu):
                self.assertGreaterEqual(estimativa, garantia * mu - 1e-9)
                # M u M' é maximal: mu1 >= (1 - 1/b)(|M| + |M'|) >= (1 - 1/b) mu / 2
                self.assertGreaterEqual(estimativa, (1 - 1 / B) * mu / 2 - 1e-9)
                self.assertLessEqual(estimativa, limite_superior(mu, k))
        self.assertGreater(avaliadas, 100)


class EstimateGeneralTests(SimpleTestCase):

    def test_triangulo(self):
        g = ciclo(3)
        relatorio = EstimadorService.estimate_general(g, EstimatorConfig(k=3, exact_reference=True), seed=0)
        self.assertEqual(relatorio.estimate, 1.0)

    def test_ciclo_impar(self):
        for seed in range(10):
            relatorio = EstimadorService.estimate_general(
                ciclo(9), EstimatorConfig(k=3, exact_reference=True), seed=seed)
            with self.subTest(seed=seed):
                self.assertGreaterEqual(relatorio.estimate, ApproxConstants.GAMMA * 4)
                self.assertLessEqual(relatorio.estimate, 4)

    def test_referencia_exata_entre_limites(self):
        cfg = EstimatorConfig(k=20, exact_reference=True, mode=MODO_GERAL)
        for i in range(60):
            g = aleatorio(6 + i % 30, 0.15, seed=i)
            mu = mu_networkx(g)
            for s in range(5):
                estimativa = EstimadorService.estimate_general(g, cfg, seed=s).estimate
                with self.subTest(i=i, seed=s, mu=mu):
                    self.assertLessEqual(estimativa, mu)
                    self.assertGreaterEqual(estimativa, mu / 2)

    def test_geral_cobre_o_bipartido(self):
        k = 10
        kb = k * B
        folga = (math.ceil(kb) - kb) / kb
        for i in range(40):
            g = bipartido_aleatorio(20 + i, 0.12, seed=i)
            mu = mu_networkx(g)
            geral = EstimadorService.estimate_general(g, EstimatorConfig(k=k, exact_reference=True), seed=i)
            bipartido = EstimadorService.estimate_bipartite(g, EstimatorConfig(k=k, exact_reference=True), seed=i)
            with self.subTest(i=i):
                self.assertGreaterEqual(geral.estimate, bipartido.estimate - folga * mu - 1e-9)

    def test_modo_amostral_pelo_lca(self):
        g = aleatorio(24, 0.15, seed=6)
        relatorio = EstimadorService.estimate_general(g, EstimatorConfig(k=2, r=30, mode=MODO_GERAL), seed=3)
        self.assertGreaterEqual(relatorio.estimate, 0)
        self.assertLessEqual(relatorio.estimate, g.n / 2)
        self.assertIn('mu_h1', relatorio.detalhes)

    def test_media_por_sementes_acima_do_limite(self):
        """
        Média de 50 sementes em exact_reference, k = 100, eps do LCA 0.05

        60 grafos gerais (n <= 50, com ciclos ímpares) em vez de 200. Com
        k = 100 o limite (0.5109 - 5 (bk)^(-1/3) - 0.05) mu fica negativo, então a
        média também é comparada com mu/2.
        """
        k = 100
        cfg = EstimatorConfig(k=k, exact_reference=True, mode=MODO_GERAL, lca_eps=0.05)
        fator = ApproxConstants.GAMMA - 5 * (B * k) ** (-1 / 3) - 0.05
        rng = np.random.default_rng(17)
        for i in range(60):
            n = int(rng.integers(5, 51))
            g = ciclo(n | 1) if i % 4 == 0 else aleatorio(n, float(rng.uniform(1, 4)) / n, seed=i)
            mu = mu_networkx(g)
            media = np.mean([EstimadorService.estimate_general(g, cfg, seed=s).estimate for s in range(50)])
            with self.subTest(i=i, n=g.n, mu=mu):
                self.assertGreaterEqual(media, fator * mu)
                self.assertGreaterEqual(media, mu / 2)

    def test_truncamentos_do_lca_no_relatorio(self):
        g = emparelhamento_perfeito(10)
        cfg = EstimatorConfig(k=2, r=30, mode=MODO_GERAL)
        with override_settings(EMPARELHAMENTO={'LCA_RAIO_MAXIMO': 1, 'LCA_EPSILON': 0.05}), \
                mock.patch('emparelhamento.services.registrar_log') as log:
            relatorio = EstimadorService.estimate_general(g, cfg, seed=3)
        self.assertGreater(relatorio.detalhes['truncamentos'], 0)
        log.assert_called_once()
        self.assertEqual(log.call_args.kwargs['nivel'], 'WARNING')
        self.assertIn(str(relatorio.detalhes['truncamentos']), log.call_args.args[1])

    def test_sem_truncamentos_no_raio_padrao(self):
        g = aleatorio(24, 0.15, seed=6)
        with mock.patch('emparelhamento.services.registrar_log') as log:
            relatorio = EstimadorService.estimate_general(g, EstimatorConfig(k=2, r=30, mode=MODO_GERAL), seed=3)
        self.assertEqual(relatorio.detalhes['truncamentos'], 0)
        log.assert_not_called()


class EstimateMultiplicativeTests(SimpleTestCase):

    def _r_esperado(self, cfg, n, razao):
        return math.ceil(cfg.fator_amostras * razao * 6 * math.log(n) ** 3 / cfg.eps ** 2)

    def test_regular_usa_razao_um(self):
        g = GeradorService.generate(GeneratorSpec(family='d-regular', n=12, d=3, seed=1))
        cfg = EstimatorConfig(eps=0.5, k=2, mode=MODO_MULTIPLICATIVO)
        relatorio = EstimadorService.estimate_multiplicative(g, cfg, seed=0)
        self.assertEqual(relatorio.detalhes['r'], self._r_esperado(cfg, 12, 1.0))
        self.assertAlmostEqual(relatorio.detalhes['grau_medio'], 3.0)

    def test_estrela_escala_com_n(self):
        folhas = 11
        g = Graph.from_edges(folhas + 1, [(0, i) for i in range(1, folhas + 1)])
        cfg = EstimatorConfig(eps=0.5, k=2, mode=MODO_MULTIPLICATIVO)
        relatorio = EstimadorService.estimate_multiplicative(g, cfg, seed=0)
        razao = folhas / (2 * folhas / (folhas + 1))
        self.assertEqual(relatorio.detalhes['grau_maximo'], folhas)
        self.assertEqual(relatorio.detalhes['r'], self._r_esperado(cfg, g.n, razao))

    def test_sem_arestas(self):
        relatorio = EstimadorService.estimate_multiplicative(
            Graph.from_edges(6, []), EstimatorConfig(k=2, mode=MODO_MULTIPLICATIVO), seed=0)
        self.assertEqual(relatorio.estimate, 0.0)


class EstimateMatrixTests(SimpleTestCase):

    def test_grafo_vazio(self):
        relatorio = EstimadorService.estimate_matrix(
            Graph.from_edges(10, []), EstimatorConfig(k=2, r=30, mode=MODO_MATRIZ), seed=0)
        self.assertEqual(relatorio.estimate, 0.0)
        self.assertGreater(relatorio.probes['matrix_probes'], 0)
        self.assertIn('escapes_v2', relatorio.detalhes)

    def test_esparsificacao_dimensionada_por_n(self):
        n = 30
        with mock.patch.object(EsparsificacaoService, 'sparsify',
                               wraps=EsparsificacaoService.sparsify) as esparsificar:
            EstimadorService.estimate_matrix(caminho(n), EstimatorConfig(k=2, r=20, mode=MODO_MATRIZ), seed=0)
        config = esparsificar.call_args.args[1]
        self.assertEqual(config.c, SparsifierConfig.padrao(n).c)
        self.assertEqual(list(config.vertex_order), list(range(n, 2 * n)) + list(range(n)))

    def test_esparsificacao_padrao_le_menos_que_a_matriz(self):
        for n in (50, 100, 200):
            g = GeradorService.generate(GeneratorSpec(family='erdos-renyi', n=n, p=8 / n, seed=3))
            ordem = list(range(n, 2 * n)) + list(range(n))
            visao = MatrixToListView(g.instrumentado())
            EsparsificacaoService.sparsify(visao, SparsifierConfig.padrao(n, ordem), 0)
            with self.subTest(n=n):
                self.assertLess(visao.stats.matrix_probes_total, n * n)

    def test_escapes_de_v2(self):
        """n = 900 com c padrão; 20 runs em vez de 100, ao menos 19 dentro de n / ln n"""
        n = 900
        g = GeradorService.generate(GeneratorSpec(family='erdos-renyi', n=n, p=8 / n, seed=3))
        ordem = list(range(n, 2 * n)) + list(range(n))
        config = SparsifierConfig.padrao(n, ordem)
        dentro = 0
        for seed in range(20):
            visao = MatrixToListView(g.instrumentado())
            M, _ = EsparsificacaoService.sparsify(visao, config, seed)
            if EstimadorService.contar_escapes(visao, M) <= n / math.log(n):
                dentro += 1
        self.assertGreaterEqual(dentro, 19)

    def test_limite_inferior_em_emparelhamento_perfeito(self):
        g = emparelhamento_perfeito(50)
        mu = g.n // 2
        for seed in range(2):
            relatorio = EstimadorService.estimate_matrix(g, EstimatorConfig(mode=MODO_MATRIZ), seed=seed)
            with self.subTest(seed=seed):
                self.assertGreaterEqual(relatorio.estimate, ApproxConstants.GAMMA * mu - g.n / math.log(g.n))
                self.assertLessEqual(relatorio.estimate, mu)
                self.assertLessEqual(relatorio.detalhes['escapes_v2'], g.n / math.log(g.n))

    def test_referencia_exata(self):
        g = emparelhamento_perfeito(3)
        relatorio = EstimadorService.estimate_matrix(
            g, EstimatorConfig(k=2, mode=MODO_MATRIZ, exact_reference=True), seed=1)
        self.assertIsNone(relatorio.sample)
        self.assertGreaterEqual(relatorio.estimate, 0)
        self.assertLessEqual(relatorio.estimate, g.n / 2)


class EstimarTests(SimpleTestCase):

    def test_despacha_pelo_modo(self):
        g = caminho(6)
        cfg = EstimatorConfig(k=2, r=20, mode=MODO_GERAL, exact_reference=True)
        self.assertEqual(EstimadorService.estimar(g, cfg, 1).mode, MODO_GERAL)

    def test_colisao_reinicia_com_semente_derivada(self):
        g = caminho(4)
        cfg = EstimatorConfig(k=2, r=10)
        esperado = EstimadorService.estimate_bipartite(g, cfg, splitmix64(7) >> 1)
        colisao = ErroRankingDuplicado((0, 1), (1, 2))
        with mock.patch.object(EstimadorService, 'estimate_bipartite',
                               side_effect=[colisao, esperado]) as chamado:
            relatorio = EstimadorService.estimar(g, cfg, 7)
        self.assertIs(relatorio, esperado)
        self.assertEqual(chamado.call_args_list[0].args[2], 7)
        self.assertEqual(chamado.call_args_list[1].args[2], splitmix64(7) >> 1)

    def test_colisoes_persistentes_propagam(self):
        cfg = EstimatorConfig(k=2, r=10)
        with mock.patch.object(EstimadorService, 'estimate_bipartite',
                               side_effect=ErroRankingDuplicado((0, 1), (1, 2))):
            with self.assertRaises(ErroRankingDuplicado):
                EstimadorService.estimar(caminho(4), cfg, 0)


class RunParallelInstancesTests(SimpleTestCase):

    def _semente(self, seed, i=0):
        return semente64(np.random.SeedSequence(seed).spawn(i + 1)[i]) >> 1

    def test_uma_instancia_igual_a_chamada_direta(self):
        g = bipartido_aleatorio(20, 0.2, seed=1)
        cfg = EstimatorConfig(k=2, r=20)
        relatorio = EstimadorService.run_parallel_instances(g, cfg, 9, count=1)
        direto = EstimadorService.estimar(g, cfg, self._semente(9))
        self.assertEqual(relatorio.seed, self._semente(9))
        self.assertEqual(relatorio.estimate, direto.estimate)

    def test_primeira_instancia_com_sucesso(self):
        g = caminho(6)
        cfg = EstimatorConfig(k=2, r=20)
        sucesso = EstimadorService.estimar(g, cfg, 1)
        falha = ErroExaustaoAmostragem(0, 10)
        with mock.patch.object(EstimadorService, 'estimar', side_effect=[falha, sucesso]):
            relatorio = EstimadorService.run_parallel_instances(g, cfg, 3, count=4)
        self.assertEqual(relatorio.seed, 1)

    def test_todas_falham(self):
        cfg = EstimatorConfig(k=2, r=20)
        with mock.patch.object(EstimadorService, 'estimar', side_effect=ErroExaustaoAmostragem(0, 10)):
            with self.assertRaises(ErroInstancias) as ctx:
                EstimadorService.run_parallel_instances(caminho(4), cfg, 0, count=3)
        self.assertEqual(len(ctx.exception.causas), 3)

    def test_count_invalido(self):
        with self.assertRaises(ErroValidacaoGrafo):
            EstimadorService.run_parallel_instances(caminho(4), EstimatorConfig(k=2), 0, count=0)

    def test_despacho_em_tasks_revoga_pendentes(self):
        g = emparelhamento_perfeito(4)
        cfg = EstimatorConfig(k=2, r=10)
        pronto = mock.Mock(**{'ready.return_value': True, 'successful.return_value': True,
                              'result': EstimadorService.estimar(g, cfg, 2).to_dict()})
        pendente = mock.Mock(**{'ready.return_value': False})
        with override_settings(CELERY_TASK_ALWAYS_EAGER=False), \
                mock.patch.object(executar_instancia, 'delay', side_effect=[pendente, pronto]) as delay:
            relatorio = EstimadorService.run_parallel_instances(g, cfg, 0, count=2)
        self.assertIsInstance(relatorio, EstimateReport)
        self.assertEqual(relatorio.estimate, 4.0)
        self.assertEqual(delay.call_count, 2)
        pendente.revoke.assert_called_once_with(terminate=True)


class ExecutarInstanciaTaskTests(SimpleTestCase):

    def test_task_devolve_relatorio_serializavel(self):
        g = emparelhamento_perfeito(5)
        cfg = EstimatorConfig(k=2, r=10, exact_reference=True)
        dados = executar_instancia(GrafoService.dump_graph(g), cfg.to_dict(), 3)
        self.assertEqual(dados['seed'], 3)
        self.assertEqual(dados['estimate'], 5.0)
        self.assertEqual(json.loads(json.dumps(dados)), dados)
