"""Unit tests for weighted spectra, connectivity and expansion certificates."""

import numpy as np
import pytest

from poset_hdx.constructors import disjoint_simplices
from poset_hdx.exceptions import BadRankError, NonStandardSchemeError, NotSelfAdjointError
from poset_hdx.models.enums import CertificateKind, ConstantsSource
from poset_hdx.operators import LinearOp, down_up_walk, up_down_walk
from poset_hdx.properties import detect_regularity
from poset_hdx.spectral import (
    certify_eposet,
    certify_one_sided,
    certify_two_sided,
    fit_eposet_constants,
    is_connected,
    link_connectivity,
    locally_connected,
    measured_two_sided,
    nonzero_eigenvalues,
    regular_eposet_constants,
    restricted_top_eigenvalue,
    weighted_operator_norm,
    weighted_spectrum,
)

from tests.fixtures import posets


class TestWeightedSpectrum:
    """Tests for spectra in the weighted inner product."""

    def test_not_self_adjoint(self):
        """Test that a non-symmetric operator is rejected with its residual."""
        poset, weights = posets.simplicial([[1, 2]])
        op = LinearOp("N", 0, 0, np.array([[0.0, 1.0], [0.0, 0.0]]), poset, weights)
        with pytest.raises(NotSelfAdjointError) as exc_info:
            weighted_spectrum(op)
        assert exc_info.value.residual == pytest.approx(1.0)
        assert exc_info.value.details["tolerance"] == pytest.approx(1e-8)

    def test_summary_fields(self, delta4):
        """Test lambda_2, lambda_min and the two-sided value."""
        poset, weights = delta4
        summary = weighted_spectrum(up_down_walk(poset, weights, 0))
        assert summary.lambda_max == pytest.approx(1.0)
        assert summary.lambda_min == pytest.approx(0.375)
        assert summary.lambda_two_sided == pytest.approx(0.375)
        assert summary.to_dict()["lambda_two_sided"] == pytest.approx(0.375)

    def test_disconnected_keeps_second_one(self):
        """Test that a disconnected complex shows a nontrivial eigenvalue 1."""
        poset, weights = posets.simplicial(disjoint_simplices(2, 2).facets)
        summary = weighted_spectrum(up_down_walk(poset, weights, 0))
        assert summary.lambda_2 == pytest.approx(1.0)

    def test_nonzero_eigenvalues(self, delta4):
        """Test that zero eigenvalues of M-_1 are dropped."""
        poset, weights = delta4
        values = nonzero_eigenvalues(down_up_walk(poset, weights, 1))
        assert values == pytest.approx([1.0] + [0.375] * 4)

    def test_operator_norm_and_top_eigenvalue(self, delta4):
        """Test the weighted norm and the mean-zero top eigenvalue."""
        poset, weights = delta4
        walk = up_down_walk(poset, weights, 1)
        assert weighted_operator_norm(walk) == pytest.approx(1.0)
        assert restricted_top_eigenvalue(walk) == pytest.approx(4 / 9)


class TestConnectivity:
    """Tests for global and local connectivity."""

    def test_connected_complexes(self, delta4, wheel, grass24):
        """Test connectivity of connected references."""
        for poset, weights in (delta4, wheel, grass24):
            assert is_connected(poset, weights)

    def test_disjoint_triangles(self):
        """Test that two disjoint triangles are disconnected."""
        poset, weights = posets.simplicial(disjoint_simplices(2, 2).facets)
        assert not is_connected(poset, weights)
        assert not locally_connected(poset, weights)

    def test_link_connectivity_keys(self, delta4):
        """Test that every link below rank d-1 is reported."""
        poset, weights = delta4
        result = link_connectivity(poset, weights)
        assert set(result) == {"{}", "{1}", "{2}", "{3}", "{4}", "{5}"}
        assert all(result.values())


class TestLocalCertificates:
    """Tests for one- and two-sided local spectral certificates."""

    def test_one_sided_passes(self, delta4, delta4_table):
        """Test the one-sided certificate on delta4."""
        poset, weights = delta4
        certificate = certify_one_sided(poset, weights, -0.24, table=delta4_table)
        assert certificate.kind == CertificateKind.ONE_SIDED
        assert certificate.verdict
        assert len(certificate.rows) == 6
        vertex_rows = [row for row in certificate.rows if row.level == 0]
        assert all(row.lambda2 == pytest.approx(-1 / 3) for row in vertex_rows)
        assert all(row.connected for row in certificate.rows)

    def test_two_sided(self, delta4):
        """Test the two-sided certificate and its failing row."""
        poset, weights = delta4
        assert certify_two_sided(poset, weights, -0.34, -0.24).verdict
        failing = certify_two_sided(poset, weights, -0.34, -0.26)
        assert not failing.verdict
        assert [row.link for row in failing.violations()] == ["{}"]
        assert failing.to_dict()["rows"][0]["pass"] is False

    def test_two_sided_is_sharp(self, delta4, delta4_table):
        """Test that the attained bounds pass and a 1e-6 tightening fails."""
        poset, weights = delta4
        exact = certify_two_sided(poset, weights, -1 / 3, -1 / 4, table=delta4_table)
        assert exact.verdict
        tightened = certify_two_sided(
            poset, weights, -1 / 3 - 1e-6, -1 / 4 - 1e-6, table=delta4_table
        )
        assert not tightened.verdict
        assert [row.link for row in tightened.violations()] == ["{}"]

    def test_nu_too_high(self, delta4):
        """Test that a lower bound above the link minimum fails."""
        poset, weights = delta4
        assert not certify_two_sided(poset, weights, -0.3, 0.0).verdict

    def test_parallel_rows_match(self, grass24):
        """Test that worker threads give the same rows."""
        poset, weights = grass24
        serial = certify_one_sided(poset, weights, 0.0)
        parallel = certify_one_sided(poset, weights, 0.0, jobs=4)
        assert [r.to_dict() for r in serial.rows] == [r.to_dict() for r in parallel.rows]

    def test_measured_two_sided(self, delta4, grass24):
        """Test the exact (nu, lambda) of both references."""
        assert measured_two_sided(*delta4) == pytest.approx((-1 / 3, -1 / 4))
        assert measured_two_sided(*grass24) == pytest.approx((-1 / 6, -1 / 14))

    def test_non_standard_rejected(self, perturbed):
        """Test that certificates need a standard scheme."""
        with pytest.raises(NonStandardSchemeError):
            certify_one_sided(*perturbed, 0.0)


class TestEposetCertificate:
    """Tests for the global eposet certificate."""

    def test_fitted_constants_on_delta4(self, delta4):
        """Test the least-squares fit for M+_1 against M-_1."""
        poset, weights = delta4
        r, delta = fit_eposet_constants(
            up_down_walk(poset, weights, 1), down_up_walk(poset, weights, 1)
        )
        assert r == pytest.approx(1 / 9, abs=1e-9)
        assert delta == pytest.approx(8 / 9, abs=1e-9)

    def test_auto_mode_rows(self, delta4):
        """Test that auto mode reports fitted and regular rows."""
        poset, weights = delta4
        certificate = certify_eposet(poset, weights, lam=0.25)
        sources = [row.source for row in certificate.rows]
        assert sources == [ConstantsSource.FITTED, ConstantsSource.REGULAR]
        fitted, regular = certificate.rows
        assert fitted.residual == pytest.approx(0.0, abs=1e-9)
        assert regular.residual == pytest.approx(2 / 9)
        assert certificate.verdict

    def test_supplied_constants(self, delta4):
        """Test a certificate with supplied constants that are too loose."""
        poset, weights = delta4
        certificate = certify_eposet(poset, weights, lam=0.2, constants={1: (1 / 3, 2 / 3)})
        assert certificate.params["constants"] == "supplied"
        assert not certificate.verdict

    def test_grassmannian_regular_constants(self, grass24):
        """Test the regular constants of F_2^4 at level 1."""
        poset, weights = grass24
        report = detect_regularity(poset)
        r, delta = regular_eposet_constants(report, 1)
        assert r == pytest.approx(1 / 7)
        assert delta == pytest.approx(6 / 7)
        certificate = certify_eposet(poset, weights, lam=0.2, regularity=report)
        regular = [row for row in certificate.rows if row.source == ConstantsSource.REGULAR]
        assert regular[0].residual == pytest.approx(1 / 7)

    def test_needs_rank_two(self):
        """Test that graphs are rejected."""
        poset, weights = posets.simplicial([[1, 2], [2, 3]])
        with pytest.raises(BadRankError):
            certify_eposet(poset, weights, lam=0.1)
