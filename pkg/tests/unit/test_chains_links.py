"""Unit tests for chain enumeration, links and cochain localization."""

import numpy as np
import pytest

from poset_hdx.core.chains import chain_sum, descent_distribution, maximal_chains
from poset_hdx.core.links import LinkTable, build_link, localize_cochain
from poset_hdx.core.validation import validate_poset
from poset_hdx.exceptions import BadRankError, NotComparableError
from poset_hdx.models.poset import Cochain
from poset_hdx.performance import SimpleCache


class TestChains:
    """Tests for maximal chains and chain-probability sums."""

    def test_chains_of_a_triangle(self, delta4):
        """Test the six orderings of a triangle's vertices."""
        poset, weights = delta4
        top = poset.id_of("{1,2,3}")
        chains = maximal_chains(poset, top, poset.minimum)
        assert len(chains) == 6
        assert len({c.elements for c in chains}) == 6
        for chain in chains:
            assert chain.bottom == poset.minimum and chain.top == top
            assert len(chain) == 4
            assert chain.probability(weights) == pytest.approx(1 / 6)

    def test_chain_sum(self, delta4):
        """Test the chain-probability sum between a triangle and a vertex."""
        poset, weights = delta4
        top = poset.id_of("{1,2,3}")
        assert chain_sum(poset, weights, top, poset.id_of("{1}")) == pytest.approx(1 / 3)
        assert chain_sum(poset, weights, top, poset.id_of("{4}")) == 0.0
        assert chain_sum(poset, weights, top, top) == 1.0

    def test_incomparable_pair(self, delta4):
        """Test that chains between incomparable elements raise."""
        poset, _ = delta4
        with pytest.raises(NotComparableError) as exc_info:
            maximal_chains(poset, poset.id_of("{1,2,3}"), poset.id_of("{4}"))
        assert "{4}" in exc_info.value.element

    def test_descent_distribution(self, grass24):
        """Test that the downward walk spreads mass uniformly per rank."""
        poset, weights = grass24
        top = poset.level(2)[0]
        mass = descent_distribution(poset, weights, top)
        points = [x for x in mass if poset.rank(x) == 0]
        assert len(points) == 7
        for x in points:
            assert mass[x] == pytest.approx(1 / 7)
        assert mass[poset.minimum] == pytest.approx(1.0)


class TestLinks:
    """Tests for links and their induced weights."""

    def test_vertex_link_of_delta4(self, delta4):
        """Test the link of a vertex: a K4 with uniform weights."""
        poset, weights = delta4
        link = build_link(poset, weights, poset.id_of("{1}"))
        assert link.base_rank == 0
        assert link.poset.d == 1
        assert link.poset.level_sizes() == [1, 4, 6]
        assert link.weights.level_masses(link.poset, 0) == pytest.approx([0.25] * 4)
        assert validate_poset(link.poset, link.weights).is_valid

    def test_link_of_minimum_is_the_poset(self, delta4):
        """Test that the link of the smallest element reproduces the weights."""
        poset, weights = delta4
        link = build_link(poset, weights, poset.minimum)
        assert link.poset.level_sizes() == poset.level_sizes()
        parents = np.array(link.to_parent)
        assert link.weights.m == pytest.approx(weights.m[parents])

    def test_link_of_perturbed_scheme_is_valid(self, perturbed):
        """Test that induced weights satisfy the weight invariants."""
        poset, weights = perturbed
        for x in poset.level(0):
            link = build_link(poset, weights, x)
            assert validate_poset(link.poset, link.weights, tol=1e-10).is_valid

    def test_link_of_point_in_grassmannian(self, grass24):
        """Test that point links of F_2^4 look like Fano planes."""
        poset, weights = grass24
        link = build_link(poset, weights, poset.level(0)[0])
        assert link.poset.level_sizes() == [1, 7, 7]

    def test_top_element_has_no_link(self, delta4):
        """Test that maximal elements raise BadRankError."""
        poset, weights = delta4
        with pytest.raises(BadRankError) as exc_info:
            build_link(poset, weights, poset.id_of("{1,2,3}"))
        assert exc_info.value.element == "{1,2,3}"

    def test_table_caches_links(self, delta4_table, delta4):
        """Test that the link table reuses built links."""
        poset, _ = delta4
        x = poset.id_of("{2}")
        assert delta4_table.link(x) is delta4_table.link(x)
        assert len(delta4_table.links_at(0)) == 5

    def test_small_cache_evicts_least_recent(self, delta4):
        """Test that a bounded link cache keeps only the most recently used links."""
        poset, weights = delta4
        cache = SimpleCache(max_size=2)
        table = LinkTable(poset, weights, cache)
        first, second, third = (poset.id_of(label) for label in ("{1}", "{2}", "{3}"))
        kept = table.link(first)
        table.link(second)
        assert table.link(first) is kept
        table.link(third)
        assert len(cache) == 2
        assert cache.get(second) is None
        assert cache.get(first) is kept
        assert cache.hits == 2


class TestLocalization:
    """Tests for restricting cochains to links."""

    def test_localize_edges_to_vertex(self, delta4):
        """Test that localization keeps the values of the faces above the base."""
        poset, weights = delta4
        link = build_link(poset, weights, poset.id_of("{1}"))
        values = np.arange(10, dtype=float)
        f = Cochain(1, values)
        local = localize_cochain(f, link)
        assert local.level == 0
        assert len(local) == 4
        expected = sorted(
            values[poset.position(e)]
            for e in poset.level(1)
            if "1" in poset.label(e).strip("{}").split(",")
        )
        assert sorted(local.values) == expected

    def test_localize_below_base(self, delta4):
        """Test that cochains not above the base are rejected."""
        poset, weights = delta4
        link = LinkTable(poset, weights).link(poset.id_of("{1}"))
        with pytest.raises(BadRankError):
            localize_cochain(Cochain.ones(poset, 0), link)
