import logging

import numpy as np
import pytest

from framekit.errors import DimMismatch, NotLowerSemiFrame, ProjectsOntoSpan
from framekit.examples.diagonal import gen_diagonal
from framekit.frames.dual_recon import (
    canonical_dual,
    canonical_tight,
    commutation_residuals,
    dual_bound_check,
    dual_from_lower,
    duality_residual,
    gram_operators,
    is_dual_pair,
    kernel_matrix,
    projection_P,
    psi_inner,
    reconstruct_frame,
    reconstruct_from_coefficients,
    reconstruct_full,
    reconstruct_RD,
    reconstruction_report,
    regularity,
    sqrt_factorization_check,
    triplet_report,
)
from framekit.frames.family import make_family
from framekit.frames.frame_ops import analysis, diagnostics
from framekit.models import ReconstructionFormula
from tests.conftest import random_complex


def _unit(n, p):
    c = np.zeros(n, dtype=np.complex128)
    c[p - 1] = 1.0
    return c


@pytest.mark.parametrize("d", [3, 8, 64, 256])
def test_canonical_dual_of_upper_family(d):
    dual = canonical_dual(gen_diagonal("pow:-1", d))
    assert np.allclose(dual.columns, np.diag(np.arange(1, d + 1)), rtol=1e-12, atol=0)
    assert "dual_on_range" not in dual.flags


def test_dual_from_lower_returns_upper_family():
    phi = gen_diagonal("pow:1", 16)
    psi = dual_from_lower(phi)
    assert np.allclose(psi.columns, np.diag(1.0 / np.arange(1, 17)), rtol=1e-12, atol=1e-15)
    report = dual_bound_check(psi, phi)
    assert report.upper_bound == pytest.approx(1.0)
    assert report.dual_lower_bound == pytest.approx(1.0)
    assert report.precondition_met and report.holds


def test_dual_from_lower_rejects_non_total():
    with pytest.raises(NotLowerSemiFrame):
        dual_from_lower(make_family(np.array([[1.0, 2.0], [0.0, 0.0]])))


@pytest.mark.parametrize("p", [1, 2, 5, 8])
def test_triplet_norms_of_basis_vectors(upper_family, p):
    c = _unit(8, p)
    report = triplet_report(upper_family, c, upper_family.columns @ c)
    assert report.norm_psi == pytest.approx(p, rel=1e-10)
    assert report.norm_zero == pytest.approx(1.0, rel=1e-10)
    assert report.norm_psi_cross == pytest.approx(1.0 / p, rel=1e-10)
    assert report.coefficients_in_range


def test_triplet_identity_norms_equal(rng):
    fam = make_family(np.eye(4))
    c = random_complex(rng, 4)
    report = triplet_report(fam, c, c)
    assert report.norm_psi == pytest.approx(report.norm_zero)
    assert report.norm_psi_cross == pytest.approx(report.norm_zero)
    assert report.norm_S_frak == pytest.approx(report.norm_zero)


def test_triplet_rejects_wrong_length(upper_family):
    with pytest.raises(DimMismatch):
        triplet_report(upper_family, np.ones(3), np.ones(8))


def test_canonical_dual_matches_dense_solve(rng):
    for d in range(1, 9):
        fam = make_family(random_complex(rng, d, d + 3))
        dual = canonical_dual(fam)
        s = fam.columns @ fam.columns.conj().T
        assert np.allclose(dual.columns, np.linalg.solve(s, fam.columns), atol=1e-9)


def test_operator_identities_on_random_families(rng):
    for trial in range(200):
        d = int(rng.integers(1, 17))
        count = int(rng.integers(min(d + 2, 24), 25))
        fam = make_family(random_complex(rng, d, count), label=f"random{trial}")
        gram = gram_operators(fam)
        f, g = random_complex(rng, d), random_complex(rng, d)

        p = projection_P(fam)
        assert np.allclose(p @ p, p, atol=1e-9)
        assert np.allclose(p, p.conj().T, atol=1e-9)

        inner = psi_inner(analysis(fam, f), analysis(fam, g), gram)
        assert abs(inner - np.vdot(f, g)) <= 1e-9 * np.linalg.norm(f) * np.linalg.norm(g)

        assert sqrt_factorization_check(fam).residual <= 1e-7
        assert np.allclose(kernel_matrix(fam).entries, p, atol=1e-9)

        for result in (
            reconstruct_frame(fam, f),
            reconstruct_frame(fam, f, variant=ReconstructionFormula.SREPR2),
            reconstruct_RD(fam, f, gram),
            reconstruct_full(fam, f, gram),
        ):
            assert result.residual <= 1e-7, (trial, result.formula)
            assert not result.projected


def test_kernel_reproduces_range(total_family, rng):
    c = analysis(total_family, random_complex(rng, total_family.dim))
    assert kernel_matrix(total_family).reproduces(c) <= 1e-9


def test_psi_inner_projects_out_of_range_coefficients(total_family, caplog):
    gram = gram_operators(total_family)
    c = np.ones(total_family.count)
    with caplog.at_level(logging.WARNING):
        value = psi_inner(c, c, gram)
    assert "projected" in caplog.text
    proj = projection_P(total_family)
    expected = np.vdot(proj @ c, gram.G_pinv.entries @ (proj @ c))
    assert value == pytest.approx(expected)


def test_reconstruct_non_total_flags_projection():
    fam = make_family(np.array([[1.0, 2.0], [0.0, 0.0]]))
    f = np.array([3.0, 4.0])
    result = reconstruct_frame(fam, f)
    assert result.projected
    assert np.allclose(result.vector, [3.0, 0.0])
    with pytest.raises(ProjectsOntoSpan):
        reconstruct_frame(fam, f, strict=True)
    with pytest.raises(ProjectsOntoSpan):
        reconstruct_full(fam, f, strict=True)
    assert "dual_on_range" in canonical_dual(fam).flags


def test_reconstruct_rd_on_range_of_non_total_family():
    fam = make_family(np.array([[1.0, 2.0], [0.0, 0.0], [0.0, 0.0]]))
    result = reconstruct_RD(fam, np.array([5.0, 0.0, 0.0]))
    assert result.residual <= 1e-12
    assert not result.projected


def test_reconstruct_from_coefficients(total_family, rng):
    f = random_complex(rng, total_family.dim)
    result = reconstruct_from_coefficients(total_family, analysis(total_family, f))
    assert np.allclose(result.vector, f, atol=1e-9)
    assert not result.projected
    outside = reconstruct_from_coefficients(total_family, random_complex(rng, total_family.count))
    assert outside.projected and outside.residual > 1e-3


def test_canonical_tight_is_parseval(total_family):
    tight = canonical_tight(total_family)
    diag = diagnostics(tight)
    assert diag.lower_bound == pytest.approx(1.0, abs=1e-10)
    assert diag.upper_bound == pytest.approx(1.0, abs=1e-10)


def test_dual_pair_residual(total_family):
    dual = canonical_dual(total_family)
    assert is_dual_pair(total_family, dual)
    assert duality_residual(dual, total_family) <= 1e-9
    assert not is_dual_pair(total_family, total_family)


def test_regularity_of_total_family(total_family):
    report = regularity(total_family)
    assert report.regular
    assert report.max_residual <= 1e-9
    assert not report.cutoff_active


def test_regularity_detects_cutoff():
    report = regularity(make_family(np.diag([1.0, 1e-15])))
    assert report.cutoff_active
    assert not report.regular


def test_commutation_residuals(total_family):
    residuals = commutation_residuals(total_family)
    assert max(residuals.values()) <= 1e-9


def test_reconstruction_report(total_family, rng):
    report = reconstruction_report(total_family, random_complex(rng, total_family.dim))
    assert report.total and report.regular
    assert [r.formula.value for r in report.residuals] == ["srepr", "srepr2", "rd", "full", "coefficients"]
    assert report.max_residual <= 1e-7


def _well_conditioned_families(rng, trials):
    for trial in range(trials):
        d = int(rng.integers(1, 13))
        count = int(rng.integers(2 * d, 2 * d + 9))
        yield make_family(random_complex(rng, d, count), label=f"random{trial}")


def test_dual_of_dual_is_original(rng):
    for fam in _well_conditioned_families(rng, 50):
        twice = canonical_dual(canonical_dual(fam))
        assert np.max(np.abs(twice.columns - fam.columns)) <= 1e-8 * np.max(np.abs(fam.columns)), fam.label


def test_gram_root_preserves_rank_on_coefficient_range(rng):
    for fam in _well_conditioned_families(rng, 30):
        gram = gram_operators(fam)
        assert np.linalg.matrix_rank(gram.G_half.entries @ fam.analysis_matrix) == fam.dim, fam.label


def test_commutation_residuals_on_random_families(rng):
    for fam in _well_conditioned_families(rng, 50):
        residuals = commutation_residuals(fam)
        assert max(residuals.values()) <= 1e-9, (fam.label, residuals)


def test_regularity_form_domain_norms(upper_family):
    report = regularity(upper_family)
    assert report.form_domain_norms == pytest.approx([1.0] * 8)
    assert report.max_form_domain_norm == pytest.approx(1.0)
    # smallest eigenvalue 1/64 against the cutoff 1e-12 * lambda_max
    assert report.cutoff_margin == pytest.approx((1.0 / 64.0) / 1e-12)


def test_regularity_form_domain_norm_bounded_by_one(total_family):
    report = regularity(total_family)
    assert report.max_form_domain_norm <= 1.0 + 1e-9
    assert report.cutoff_margin > 1.0
