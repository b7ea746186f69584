"""Unit tests for near-eigenvalue tables, injectivity and the eposet equivalence."""

import numpy as np
import pytest

from poset_hdx.exceptions import BadRankError, HypothesisError, NotInjectiveError
from poset_hdx.models.enums import ConstantsSource
from poset_hdx.theorems import (
    at_most_one_common_cover,
    eposet_decomposition,
    eposet_from_two_sided,
    eposet_residual,
    grassmannian_r_table,
    r_table,
    resolve_constants,
    simplicial_r_table,
    two_sided_from_eposet,
    verify_injectivity,
)

from tests.fixtures import posets


class TestRTables:
    """Tests for r^l_i."""

    def test_simplicial(self):
        """Test i/(l+2)."""
        assert simplicial_r_table(1) == pytest.approx({1: 1 / 3, 2: 2 / 3, 3: 1.0})

    def test_recursion_reproduces_simplicial(self):
        """Test the general table with simplicial constants."""
        table = r_table({-1: 1.0, 0: 0.5, 1: 1 / 3}, {0: 0.5, 1: 2 / 3}, 1)
        assert table == pytest.approx(simplicial_r_table(1))

    def test_recursion_reproduces_grassmannian(self):
        """Test the general table with q = 2 Grassmannian constants."""
        rates = {-1: 1.0, 0: 1 / 3, 1: 1 / 7}
        deltas = {0: 2 / 3, 1: 6 / 7}
        assert r_table(rates, deltas, 1) == pytest.approx(grassmannian_r_table(1, 2))
        assert grassmannian_r_table(1, 2) == pytest.approx({1: 1 / 7, 2: 3 / 7, 3: 1.0})

    def test_constant_entry_is_one_for_any_constants(self):
        """Test that the entry of the constants stays 1 off the regular case."""
        table = r_table({0: 0.2, 1: 0.3}, {0: 0.5, 1: 0.6}, 1)
        assert table == pytest.approx({1: 0.3, 2: 0.3 + 0.6 * 0.2, 3: 1.0})


class TestResolveConstants:
    """Tests for choosing (r_j, delta_j)."""

    def test_regular_and_supplied(self, delta4):
        """Test that supplied constants win over regular ones."""
        resolved, sources = resolve_constants(*delta4, 1, constants={1: (0.2, 0.7)})
        assert resolved[-1] == (1.0, 0.0)
        assert resolved[0] == pytest.approx((0.5, 0.5))
        assert resolved[1] == pytest.approx((0.2, 0.7))
        assert sources == {0: ConstantsSource.REGULAR, 1: ConstantsSource.SUPPLIED}

    def test_residuals(self, delta4):
        """Test the residual norms for regular constants."""
        assert eposet_residual(*delta4, 0, 0.5, 0.5) == pytest.approx(1 / 8)
        assert eposet_residual(*delta4, 1, 1 / 3, 2 / 3) == pytest.approx(2 / 9)


class TestInjectivity:
    """Tests for injectivity of U_j."""

    @pytest.mark.parametrize(
        "j, r, delta, bound",
        [(0, 0.5, 0.5, 3 / 8), (1, 1 / 3, 2 / 3, 1 / 9)],
    )
    def test_delta4(self, delta4, j, r, delta, bound):
        """Test the lower bound on lambda_min(M+_j), which is tight on delta4."""
        check = verify_injectivity(*delta4, j, r, delta)
        assert check.bound == pytest.approx(bound)
        assert check.measured == pytest.approx(bound)
        assert check.verdict

    def test_skipped_when_residual_too_large(self, delta4):
        """Test that mu >= r_j gives no conclusion."""
        check = verify_injectivity(*delta4, 1, 0.0, 1.0)
        assert check.verdict is None
        assert check.details["reason"] == "mu >= r_j"

    def test_level_range(self, delta4):
        """Test that j must lie below d."""
        with pytest.raises(BadRankError):
            verify_injectivity(*delta4, 2, 0.5, 0.5)


class TestEposetDecomposition:
    """Tests for the split along U^(l-i)(ker D_i)."""

    def test_delta4(self, delta4):
        """Test reconstruction and orthogonality on delta4."""
        poset, weights = delta4
        f = np.random.default_rng(3).normal(size=poset.level_size(1))
        result = eposet_decomposition(poset, weights, 1, f)
        assert set(result.components) == {-1, 0, 1}
        assert result.reconstruction_residual < 1e-9
        assert max(result.orthogonality.values()) < 1e-9
        assert result.eigen_residuals[-1] < 1e-9
        assert result.r_table == pytest.approx(simplicial_r_table(1))
        norms = result.component_norms_sq
        total = sum(float(v) for v in f * weights.level_masses(poset, 1) * f)
        assert sum(norms.values()) == pytest.approx(total)

    def test_four_cycle_is_not_injective(self, square):
        """Test that U_0 of a 4-cycle has a kernel."""
        with pytest.raises(NotInjectiveError) as exc_info:
            eposet_decomposition(*square, 1, np.ones(4))
        assert exc_info.value.level == 0

    def test_level_range(self, delta4):
        """Test that l must lie below d."""
        with pytest.raises(BadRankError):
            eposet_decomposition(*delta4, 2, np.ones(10))


class TestEquivalence:
    """Tests for both directions between eposets and two-sided link expansion."""

    def test_eposet_from_two_sided(self, delta4, delta4_table):
        """Test the residual bound from the link spectra of delta4."""
        check = eposet_from_two_sided(*delta4, table=delta4_table)
        assert check.details["lambda"] == pytest.approx(1 / 3)
        assert check.bound == pytest.approx(2 / 9)
        assert check.measured == pytest.approx(2 / 9)
        assert check.verdict

    def test_eposet_needs_al(self, square):
        """Test that the square cell misses exact AL."""
        with pytest.raises(HypothesisError) as exc_info:
            eposet_from_two_sided(*square)
        assert exc_info.value.missing == ["exact property AL"]

    def test_two_sided_from_eposet(self, delta4):
        """Test the link bound from the eposet residual of delta4."""
        check = two_sided_from_eposet(*delta4)
        assert check.details["mu"] == pytest.approx(2 / 9)
        assert check.details["factor"] == pytest.approx(3.0)
        assert check.bound == pytest.approx(4 / 3)
        assert check.measured == pytest.approx(1 / 3)
        assert check.verdict

    def test_shared_covers_skip(self):
        """Test that a digon skips the converse direction."""
        poset, weights = posets.digon()
        assert not at_most_one_common_cover(poset)
        check = two_sided_from_eposet(poset, weights)
        assert check.verdict is None
        assert check.details["reason"] == "some pair shares two covers"
