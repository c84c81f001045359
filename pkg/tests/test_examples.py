import math

import numpy as np
import pytest

from config.settings import get_settings
from framekit.errors import InvalidInput
from framekit.examples.affine_cs import (
    AffineCSConfig,
    affine_cs_generator,
    affine_cs_kernel,
    analytic_frame_operator,
    frame_operator_residual,
    gen_affine_cs,
    mother_samples,
    x_grid,
)
from framekit.examples.catalog import WORKED_EXAMPLES, run_worked_examples
from framekit.examples.diagonal import diagonal_generator, gen_diagonal
from framekit.examples.multiplier import MultiplierModel, gen_multiplier, multiplier_generator
from framekit.examples.weights import explicit_weights, parse_weight_rule
from framekit.frames.dual_recon import canonical_dual, projection_P, regularity
from framekit.frames.frame_ops import analysis, classify_sweep, diagnostics, frame_operator
from framekit.models import Verdict
from tests.conftest import random_complex


class TestWeightRules:
    def test_power(self):
        assert np.allclose(parse_weight_rule("pow:-1").values(3), [1.0, 0.5, 1.0 / 3.0])

    def test_const(self):
        assert np.array_equal(parse_weight_rule("const:2").values(2), [2.0, 2.0])

    def test_list(self, tmp_path):
        path = tmp_path / "w.txt"
        path.write_text("1, 2\n3 4\n")
        rule = parse_weight_rule(f"list:{path}")
        assert np.array_equal(rule.values(4), [1.0, 2.0, 3.0, 4.0])
        with pytest.raises(InvalidInput):
            rule.values(5)

    def test_uniform_is_prefix_stable(self):
        rule = parse_weight_rule("uniform:0.5,2,11")
        short, long = rule.values(8), rule.values(32)
        assert np.array_equal(short, long[:8])
        assert np.all((long >= 0.5) & (long <= 2.0))

    @pytest.mark.parametrize("text", ["", "sqrt:2", "pow:x", "const:0", "const:-1", "uniform:1",
                                      "uniform:-1,2", "list:/no/such/file"])
    def test_invalid(self, text):
        with pytest.raises(InvalidInput):
            parse_weight_rule(text)

    def test_explicit_weights_table(self):
        assert np.array_equal(explicit_weights((3.0, 1.0)).values(2), [3.0, 1.0])


class TestDiagonal:
    def test_upper_family(self):
        fam = gen_diagonal("pow:-1", 3)
        assert np.allclose(fam.columns, np.diag([1.0, 0.5, 1.0 / 3.0]))

    def test_unit_weights_identity(self):
        assert np.array_equal(gen_diagonal("const:1", 5).columns, np.eye(5))

    @pytest.mark.parametrize("d", [8, 64, 256])
    def test_frame_operator_is_weights_squared(self, d):
        s = frame_operator(gen_diagonal("pow:-1", d)).entries
        assert np.max(np.abs(s - np.diag(1.0 / np.arange(1, d + 1) ** 2))) <= 1e-12

    def test_lower_semi_frame_sweep(self):
        assert classify_sweep(diagonal_generator("pow:1"), (8, 16, 32)).verdict is Verdict.LOWER_SEMI_FRAME

    def test_rejects_bad_dim(self):
        with pytest.raises(InvalidInput):
            gen_diagonal("pow:1", 0)


class TestMultiplier:
    def test_constant_symbol_is_parseval(self):
        diag = diagnostics(gen_multiplier("const:1", 6))
        assert diag.lower_bound == pytest.approx(1.0)
        assert diag.upper_bound == pytest.approx(1.0)

    def test_frame_operator_is_symbol(self):
        s = frame_operator(gen_multiplier("pow:2", 5)).entries
        assert np.allclose(s, np.diag([1.0, 4.0, 9.0, 16.0, 25.0]))

    def test_dual_frame_operator_is_inverse_symbol(self):
        dual = canonical_dual(gen_multiplier("pow:2", 6))
        s = frame_operator(dual).entries
        assert np.max(np.abs(s - np.diag(1.0 / np.arange(1, 7) ** 2))) <= 1e-15

    def test_unbounded_symbol_is_lower_semi_frame(self):
        verdict = classify_sweep(multiplier_generator("pow:2"), (8, 16, 32))
        assert verdict.verdict is Verdict.LOWER_SEMI_FRAME

    def test_bounded_random_symbol_is_frame(self):
        # the verdict on a random symbol depends on the seed, 7 is pinned
        dims = get_settings().sweep.default_dims
        verdict = classify_sweep(multiplier_generator("uniform:0.5,2,7"), dims)
        assert verdict.verdict is Verdict.FRAME
        for point in verdict.points:
            assert 0.5 <= point.lower_bound <= point.upper_bound <= 2.0

    def test_multiplicity_other_than_one_rejected(self):
        with pytest.raises(InvalidInput):
            MultiplierModel(parse_weight_rule("const:1"), multiplicity=3)


class TestAffineCoherentStates:
    def test_defaults_from_settings(self):
        cfg = AffineCSConfig.from_settings()
        assert (cfg.n, cfg.r_nodes, cfg.x_samples) == (1, 512, 256)
        assert cfg.lower_limit == pytest.approx(40.0 / 1e4)

    def test_settings_override(self, monkeypatch):
        monkeypatch.setenv("FRAMEKIT_AFFINE_R_NODES", "64")
        get_settings.cache_clear()
        assert AffineCSConfig.from_settings().r_nodes == 64

    def test_admissibility_normalization(self):
        cfg = AffineCSConfig(r_nodes=64, r_max=10.0, mother=lambda r: 3.0 * np.exp(-r))
        nodes, _ = cfg.quadrature_rule()
        psi = mother_samples(cfg, nodes)
        assert np.max(2 * math.pi * nodes ** (cfg.n - 1) * np.abs(psi) ** 2) == pytest.approx(1.0, abs=1e-6)

    def test_vanishing_mother_rejected(self):
        with pytest.raises(InvalidInput):
            gen_affine_cs(AffineCSConfig(r_nodes=16, mother=np.zeros_like))

    def test_single_sample_self_overlap(self):
        cfg = AffineCSConfig(r_nodes=64, r_max=10.0, x_samples=1, measure_exponent=2)
        fam = gen_affine_cs(cfg)
        nodes, weights = cfg.quadrature_rule()
        psi = mother_samples(cfg, nodes)
        x, dx = x_grid(cfg)
        assert x.tolist() == [0.0] and dx.tolist() == [1.0]
        assert np.allclose(fam.columns[:, 0], psi * np.sqrt(weights * nodes ** 2))
        overlap = np.vdot(fam.column(0), fam.column(0)).real
        assert overlap == pytest.approx(np.sum(np.abs(psi) ** 2 * nodes ** 2 * weights))

    def test_frame_operator_matches_multiplication_operator(self):
        cfg = AffineCSConfig.from_settings()
        residual = frame_operator_residual(cfg)
        assert residual <= 0.05
        refined = [frame_operator_residual(cfg.refined(level)) for level in (1, 2)]
        assert refined[0] <= residual + 1e-12
        assert refined[1] <= refined[0] + 1e-12

    def test_analytic_operator_peak_is_one(self):
        target = analytic_frame_operator(AffineCSConfig(r_nodes=32, r_max=10.0))
        assert np.max(np.abs(target)) == pytest.approx(1.0)

    def test_default_mother_is_not_regular(self, monkeypatch):
        monkeypatch.setenv("FRAMEKIT_EIG_BACKEND", "lapack")
        get_settings.cache_clear()
        cfg = AffineCSConfig.from_settings(x_samples=512)
        assert cfg.x_samples >= cfg.r_nodes
        report = regularity(gen_affine_cs(cfg))
        x, _ = x_grid(cfg)
        k0 = int(np.argmin(np.abs(x)))
        assert x[k0] == pytest.approx(0.0, abs=1e-12)
        assert report.cutoff_active
        assert report.column_residuals[k0] > get_settings().numerics.regularity_tol
        assert not report.regular

    def test_kernel_reproduces_range(self, rng):
        cfg = AffineCSConfig(r_nodes=64, x_samples=128, r_max=8.0)
        fam = gen_affine_cs(cfg)
        kernel = affine_cs_kernel(cfg)
        c = analysis(fam, random_complex(rng, fam.dim))
        assert np.linalg.norm(kernel @ c - c) <= 1e-10 * np.linalg.norm(c)
        assert np.allclose(kernel, projection_P(fam), atol=1e-8)

    def test_generator_dimension_is_node_count(self):
        gen = affine_cs_generator(AffineCSConfig(r_nodes=64, x_samples=32, r_max=10.0))
        assert gen.produce(48).dim == 48
        with pytest.raises(InvalidInput):
            gen.produce(1)

    def test_trapezoid_quadrature_weights(self):
        nodes, weights = AffineCSConfig(r_nodes=5, r_max=4.0, r_min=1.0, quadrature="trapezoid").quadrature_rule()
        assert np.allclose(nodes, [1.0, 1.75, 2.5, 3.25, 4.0])
        assert np.allclose(weights, [0.375, 0.75, 0.75, 0.75, 0.375])


class TestWorkedExamples:
    @pytest.fixture
    def results(self, monkeypatch):
        monkeypatch.setenv("FRAMEKIT_EIG_BACKEND", "lapack")
        get_settings.cache_clear()
        return run_worked_examples()

    def test_every_example_runs(self, results):
        assert set(results) == set(WORKED_EXAMPLES)

    def test_semi_frame_verdicts(self, results):
        assert results["upper_semi_frame"].verdict is Verdict.UPPER_SEMI_FRAME
        assert results["lower_semi_frame"].verdict is Verdict.LOWER_SEMI_FRAME
        assert results["multiplier_unbounded"].verdict is Verdict.LOWER_SEMI_FRAME
        assert results["multiplier_bounded"].verdict is Verdict.FRAME

    def test_dual_of_lower_semi_frame_is_upper_dual(self, results):
        report = results["lower_to_upper_dual"]
        assert report.duality_residual <= 1e-8
        assert report.precondition_met
        assert report.holds
        assert report.upper_bound == pytest.approx(1.0)
        assert report.dual_lower_bound == pytest.approx(1.0)

    def test_triplet_norms_of_second_basis_vector(self, results):
        report = results["triplet_norms"]
        assert report.norm_psi == pytest.approx(2.0)
        assert report.norm_zero == pytest.approx(1.0)
        assert report.norm_psi_cross == pytest.approx(0.5)

    def test_affine_coherent_states(self, results):
        report = results["affine_coherent_states"]
        assert report.frame_operator_residual <= 0.05
        assert report.regularity_x_samples >= report.r_nodes
        assert report.x0_residual > get_settings().numerics.regularity_tol
        assert not report.x0_regular
        assert not report.regular

    def test_orthogonal_fusion_is_parseval(self, results):
        report = results["orthogonal_fusion"]
        assert report.total
        assert report.lower_bound == pytest.approx(1.0)
        assert report.upper_bound == pytest.approx(1.0)
        assert report.reconstruction_residual <= 1e-10
