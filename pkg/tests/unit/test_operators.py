"""Unit tests for up/down operators, walks and adjacency operators."""

import numpy as np
import pytest

from poset_hdx.core.links import build_link
from poset_hdx.exceptions import BadRankError, DegenerateCoverError, LevelMismatchError
from poset_hdx.models.poset import Cochain
from poset_hdx.operators import (
    NON_SELF_ADJOINT,
    InnerProductContext,
    adjacency_operator,
    adjacency_vs_upper_residual,
    down_operator,
    down_up_walk,
    hat_localize,
    up_down_walk,
    up_operator,
    weighted_inner_product,
)
from poset_hdx.spectral import weighted_spectrum

from tests.fixtures import posets


def _random_cochain(poset, level, seed=0):
    rng = np.random.default_rng(seed)
    return Cochain(level, rng.normal(size=poset.level_size(level)))


class TestUpDown:
    """Tests for the up and down operators."""

    def test_shapes_and_names(self, delta4):
        """Test operator shapes and symbols."""
        poset, weights = delta4
        up = up_operator(poset, weights, 0)
        down = down_operator(poset, weights, 2)
        assert up.matrix.shape == (10, 5)
        assert down.matrix.shape == (10, 10)
        assert up.name == "U_0" and down.name == "D_2"

    def test_up_averages_children(self, delta4):
        """Test that U of a constant is constant."""
        poset, weights = delta4
        ones = Cochain.ones(poset, 1)
        assert up_operator(poset, weights, 1).apply(ones).values == pytest.approx(np.ones(10))

    @pytest.mark.parametrize("k", [-1, 0, 1])
    def test_adjointness(self, perturbed, k):
        """Test <U g, f> = <g, D f> for a non-standard scheme."""
        poset, weights = perturbed
        g = _random_cochain(poset, k, seed=1)
        f = _random_cochain(poset, k + 1, seed=2)
        up = up_operator(poset, weights, k)
        down = down_operator(poset, weights, k + 1)
        lhs = weighted_inner_product(up.apply(g), f, up.target_context)
        rhs = weighted_inner_product(g, down.apply(f), down.target_context)
        assert lhs == pytest.approx(rhs, rel=1e-10, abs=1e-12)

    def test_level_range(self, delta4):
        """Test that out-of-range levels raise BadRankError."""
        poset, weights = delta4
        with pytest.raises(BadRankError):
            up_operator(poset, weights, 2)
        with pytest.raises(BadRankError):
            down_operator(poset, weights, -1)

    def test_apply_wrong_level(self, delta4):
        """Test that applying to the wrong level raises LevelMismatchError."""
        poset, weights = delta4
        with pytest.raises(LevelMismatchError):
            up_operator(poset, weights, 0).apply(Cochain.ones(poset, 1))

    def test_composition_levels(self, delta4):
        """Test that composition checks intermediate levels."""
        poset, weights = delta4
        up0 = up_operator(poset, weights, 0)
        with pytest.raises(LevelMismatchError):
            up0 @ up0

    def test_inner_product_level(self, delta4):
        """Test that inner products check the cochain level."""
        poset, weights = delta4
        ctx = InnerProductContext.of(poset, weights, 0)
        with pytest.raises(LevelMismatchError):
            weighted_inner_product(Cochain.ones(poset, 0), Cochain.ones(poset, 1), ctx)
        assert ctx.norm(np.ones(5)) == pytest.approx(1.0)


class TestWalks:
    """Tests for the upper and lower walks."""

    def test_upper_walk_spectrum_level0(self, delta4):
        """Test M+_0 on delta4."""
        poset, weights = delta4
        summary = weighted_spectrum(up_down_walk(poset, weights, 0))
        assert summary.eigenvalues == pytest.approx([1.0] + [0.375] * 4)
        assert summary.lambda_2 == pytest.approx(0.375)

    def test_upper_walk_spectrum_level1(self, delta4):
        """Test M+_1 on delta4."""
        poset, weights = delta4
        summary = weighted_spectrum(up_down_walk(poset, weights, 1))
        expected = [1.0] + [4 / 9] * 4 + [1 / 9] * 5
        assert summary.eigenvalues == pytest.approx(expected, abs=1e-10)

    def test_lower_walk_spectrum(self, delta4):
        """Test M-_1 on delta4."""
        poset, weights = delta4
        summary = weighted_spectrum(down_up_walk(poset, weights, 1))
        assert summary.eigenvalues == pytest.approx([1.0] + [0.375] * 4 + [0.0] * 5, abs=1e-10)

    def test_walks_are_stochastic(self, perturbed):
        """Test that rows of both walks sum to one."""
        poset, weights = perturbed
        for k in range(0, poset.d):
            assert up_down_walk(poset, weights, k).matrix.sum(axis=1) == pytest.approx(1.0)
        for k in range(1, poset.d + 1):
            assert down_up_walk(poset, weights, k).matrix.sum(axis=1) == pytest.approx(1.0)

    def test_walks_self_adjoint_for_any_scheme(self, perturbed):
        """Test that both walks are self-adjoint even for jittered weights."""
        poset, weights = perturbed
        assert up_down_walk(poset, weights, 1).self_adjoint_residual() < 1e-12
        assert down_up_walk(poset, weights, 2).self_adjoint_residual() < 1e-12

    def test_walk_names(self, delta4):
        """Test walk symbols."""
        poset, weights = delta4
        assert up_down_walk(poset, weights, 0).name == "M+_0"
        assert down_up_walk(poset, weights, 1).name == "M-_1"


class TestAdjacency:
    """Tests for the non-lazy adjacency operators."""

    def test_global_adjacency_is_complete_graph_walk(self, delta4):
        """Test A_0 of delta4: the walk on K5."""
        poset, weights = delta4
        adjacency = adjacency_operator(poset, weights, 0)
        assert np.diag(adjacency.matrix) == pytest.approx(np.zeros(5))
        assert adjacency.matrix.sum(axis=1) == pytest.approx(1.0)
        summary = weighted_spectrum(adjacency)
        assert summary.nontrivial == pytest.approx([-0.25] * 4)
        assert adjacency.flags == ()

    @pytest.mark.parametrize("l, n_low", [(0, 2), (1, 3)])
    def test_upper_walk_from_adjacency(self, delta4, l, n_low):
        """Test M+_l = ((N-1)/N) A_l + Id/N on a regular complex."""
        poset, weights = delta4
        assert adjacency_vs_upper_residual(poset, weights, l, n_low) < 1e-12

    def test_non_standard_scheme_is_flagged(self, perturbed):
        """Test the caveat flag on non-standard schemes."""
        poset, weights = perturbed
        assert NON_SELF_ADJOINT in adjacency_operator(poset, weights, 0).flags

    def test_degenerate_cover(self):
        """Test that an element covering one element raises."""
        poset, weights = posets.chain()
        with pytest.raises(DegenerateCoverError) as exc_info:
            adjacency_operator(poset, weights, 0)
        assert exc_info.value.element == "A"
        assert exc_info.value.level == 1

    def test_top_level_has_no_adjacency(self, delta4):
        """Test that A_d is not defined."""
        poset, weights = delta4
        with pytest.raises(BadRankError):
            adjacency_operator(poset, weights, 2)


class TestHatLocalization:
    """Tests for the hat localization of level-0 cochains."""

    def test_indicator_moves_to_the_other_endpoint(self, delta4):
        """Test that the hat of an indicator marks the edge to that vertex."""
        poset, weights = delta4
        link = build_link(poset, weights, poset.id_of("{1}"))
        f = Cochain.indicator(poset, poset.id_of("{2}"))
        hat = hat_localize(poset, weights, f, link)
        assert hat.level == 0
        for i in link.poset.level(0):
            expected = 1.0 if link.poset.label(i) == "{1,2}" else 0.0
            assert hat.values[link.poset.position(i)] == pytest.approx(expected)

    def test_needs_vertex_link(self, delta4):
        """Test that the hat needs a vertex link and a level-0 cochain."""
        poset, weights = delta4
        link = build_link(poset, weights, poset.minimum)
        with pytest.raises(BadRankError):
            hat_localize(poset, weights, Cochain.ones(poset, 0), link)
