"""Unit tests for the poset builders and oracle link graphs."""

import numpy as np
import pytest

from poset_hdx.constructors import (
    BipartiteGraphSpec,
    FacetList,
    HyperplaneEnumerator,
    SubspaceCode,
    bouquet_graph,
    check_prime_power,
    coordinate_code,
    disjoint_simplices,
    facets_of,
    from_facets,
    full_simplex,
    gaussian_binomial,
    grassmannian,
    iter_rref,
    link_graph_gprime,
    parse_simplex_label,
    perturbed_weight_scheme,
    posetification_weights,
    posetify,
    q_integer,
    standard_weight_scheme,
    thickness,
)
from poset_hdx.core.validation import validate_poset
from poset_hdx.exceptions import (
    BadArgumentsError,
    NonPureError,
    NotBipartiteError,
    ResourceLimitError,
)

from tests.fixtures.posets import WHEEL_FACETS


class TestSimplicial:
    """Tests for simplicial complexes as posets."""

    def test_full_simplex_counts(self):
        """Test face counts of all triangles on five vertices."""
        poset = from_facets(full_simplex(5, 2))
        assert poset.level_sizes() == [1, 5, 10, 10]
        assert poset.d == 2

    def test_covers_are_one_vertex_extensions(self, delta4):
        """Test that every cover adds exactly one vertex."""
        poset, _ = delta4
        for child, parent in poset.covers():
            small = parse_simplex_label(poset.label(child))
            big = parse_simplex_label(poset.label(parent))
            assert small < big and len(big - small) == 1

    def test_non_pure_rejected(self):
        """Test that facets of mixed sizes raise NonPureError."""
        with pytest.raises(NonPureError) as exc_info:
            from_facets([[1, 2], [3]])
        assert exc_info.value.details["sizes"] == [1, 2]

    def test_empty_facets_rejected(self):
        """Test that an empty facet list is rejected."""
        with pytest.raises(BadArgumentsError):
            from_facets([])

    def test_duplicate_facets_collapse(self):
        """Test that repeated facets are deduplicated."""
        facets = FacetList.from_iterable([[2, 1], [1, 2], [2, 3]])
        assert len(facets.facets) == 2
        assert facets.vertices == (1, 2, 3)
        assert facets.d == 1

    def test_facets_round_trip(self, wheel):
        """Test recovering the facet list from the poset."""
        poset, _ = wheel
        assert facets_of(poset) == FacetList.from_iterable(WHEEL_FACETS)

    def test_thickness(self):
        """Test the codimension-1 thickness of several complexes."""
        assert thickness(full_simplex(5, 2)) == 2
        assert thickness(FacetList.from_iterable(WHEEL_FACETS)) == 1
        assert thickness(full_simplex(3, 2)) == 0

    def test_disjoint_simplices(self):
        """Test that disjoint simplices use consecutive vertices."""
        facets = disjoint_simplices(2, 2)
        assert facets.facets == (frozenset({1, 2, 3}), frozenset({4, 5, 6}))
        with pytest.raises(BadArgumentsError):
            disjoint_simplices(0, 2)

    def test_parse_label(self):
        """Test parsing simplex labels."""
        assert parse_simplex_label("{1,2}") == frozenset({1, 2})
        assert parse_simplex_label("{}") == frozenset()
        with pytest.raises(BadArgumentsError):
            parse_simplex_label("12")


class TestWeights:
    """Tests for the standard and perturbed weight schemes."""

    def test_standard_scheme_is_valid(self, wheel):
        """Test that the standard scheme satisfies all weight invariants."""
        poset, weights = wheel
        assert validate_poset(poset, weights).is_valid

    def test_top_weights_are_normalized(self, delta4):
        """Test supplied top weights are rescaled to sum to one."""
        poset, _ = delta4
        tops = {y: float(i + 1) for i, y in enumerate(poset.level(2))}
        weights = standard_weight_scheme(poset, tops)
        assert weights.level_masses(poset, 2).sum() == pytest.approx(1.0)
        assert validate_poset(poset, weights).is_valid

    def test_nonpositive_top_weight(self, delta4):
        """Test that a zero top weight is rejected."""
        poset, _ = delta4
        tops = {y: 1.0 for y in poset.level(2)}
        tops[poset.level(2)[0]] = 0.0
        with pytest.raises(BadArgumentsError):
            standard_weight_scheme(poset, tops)

    def test_perturbation_is_seeded(self, delta4):
        """Test that equal seeds give equal schemes and the result is valid."""
        poset, _ = delta4
        a = perturbed_weight_scheme(poset, 0.1, seed=3)
        b = perturbed_weight_scheme(poset, 0.1, seed=3)
        c = perturbed_weight_scheme(poset, 0.1, seed=4)
        assert np.array_equal(a.m, b.m)
        assert not np.allclose(a.m, c.m)
        assert validate_poset(poset, a).is_valid

    def test_jitter_range(self, delta4):
        """Test that jitter outside [0, 1) is rejected."""
        with pytest.raises(BadArgumentsError):
            perturbed_weight_scheme(delta4[0], jitter=1.0)


class TestQAnalog:
    """Tests for q-integers and Gaussian binomials."""

    def test_gaussian_binomial_values(self):
        """Test known subspace counts."""
        assert gaussian_binomial(4, 1, 2) == 15
        assert gaussian_binomial(4, 2, 2) == 35
        assert gaussian_binomial(3, 1, 3) == 13
        assert gaussian_binomial(4, 2, 3) == 130
        assert gaussian_binomial(5, 0, 2) == 1

    def test_gaussian_binomial_bad_arguments(self):
        """Test that k outside 0..n or composite q raise."""
        with pytest.raises(BadArgumentsError):
            gaussian_binomial(3, 4, 2)
        with pytest.raises(BadArgumentsError):
            gaussian_binomial(3, 1, 6)

    def test_q_integer(self):
        """Test q-integers."""
        assert q_integer(3, 2) == 7
        assert q_integer(2, 3) == 4
        assert q_integer(0, 5) == 0

    @pytest.mark.parametrize("q", [2, 3, 4, 5, 8, 9])
    def test_prime_powers_accepted(self, q):
        """Test that prime powers pass the check."""
        assert check_prime_power(q) == q

    @pytest.mark.parametrize("q", [0, 1, 6, 10, True])
    def test_non_prime_powers_rejected(self, q):
        """Test that other values raise BadArgumentsError."""
        with pytest.raises(BadArgumentsError):
            check_prime_power(q)


class TestGrassmannian:
    """Tests for subspace posets over finite fields."""

    def test_rref_count_matches_binomial(self):
        """Test that RREF enumeration hits every subspace once."""
        assert len(set(iter_rref(2, 4, 2))) == 35
        assert len(list(iter_rref(1, 3, 3))) == 13

    def test_level_sizes(self, grass24):
        """Test level sizes of the subspaces of F_2^4."""
        poset, _ = grass24
        assert poset.level_sizes() == [1, 15, 35, 15]
        assert poset.label(poset.minimum) == "{0}"

    def test_cover_counts(self, grass24):
        """Test that a k-space covers [k]_2 subspaces and lies in [4-k]_2 others."""
        poset, _ = grass24
        for x in poset.level(1):
            assert poset.nn(x) == 3
            assert len(poset.parents[x]) == 3
        for x in poset.level(2):
            assert poset.nn(x) == 7

    def test_hyperplanes_of_a_plane(self):
        """Test the three lines of a plane over F_2."""
        plane = SubspaceCode(2, 3, ((1, 0, 0), (0, 1, 0)))
        lines = HyperplaneEnumerator(2).hyperplanes(plane)
        assert {line.label for line in lines} == {"100", "010", "110"}

    def test_extension_field(self):
        """Test a subspace poset over F_4."""
        poset, codes = grassmannian(4, 3, 1)
        assert poset.level_sizes() == [1, 21, 21]
        for x in poset.level(1):
            assert poset.nn(x) == 5
        assert all(code.q == 4 for code in codes.values())

    def test_code_properties(self):
        """Test support and coordinate detection."""
        code = SubspaceCode(2, 3, ((1, 0, 1),))
        assert code.support == frozenset({0, 2})
        assert not code.is_coordinate
        assert SubspaceCode(2, 3, ((0, 1, 0),)).is_coordinate

    def test_resource_cap(self):
        """Test that the element cap is enforced before enumeration."""
        with pytest.raises(ResourceLimitError) as exc_info:
            grassmannian(2, 4, 2, max_elements=10)
        assert exc_info.value.details["count"] == 66

    def test_rank_out_of_range(self):
        """Test that d must stay below n."""
        with pytest.raises(BadArgumentsError):
            grassmannian(2, 3, 3)


class TestPosetification:
    """Tests for posetified complexes."""

    def test_full_simplex_gives_grassmannian(self):
        """Test that posetifying a full simplex yields every subspace."""
        poset, _ = posetify(full_simplex(3, 2), 2)
        full, _ = grassmannian(2, 3, 2)
        assert poset.level_sizes() == [1, 7, 7, 1]
        assert set(poset.labels) == set(full.labels)

    def test_path_complex(self):
        """Test that two edges sharing a vertex share one line."""
        facets = FacetList.from_iterable([[1, 2], [2, 3]])
        poset, codes = posetify(facets, 2)
        assert poset.level_sizes() == [1, 5, 2]
        assert all(codes[x].support <= {0, 1} or codes[x].support <= {1, 2} for x in poset.elements)

    def test_facet_weights(self):
        """Test that facet weights land on the coordinate subspaces."""
        facets = FacetList.from_iterable([[1, 2], [2, 3]])
        poset, _ = posetify(facets, 2)
        weights = posetification_weights(poset, facets, 2, {"{1,2}": 3.0, "{2,3}": 1.0})
        top = poset.id_of(coordinate_code(frozenset({1, 2}), facets.vertices, 2).label)
        assert poset.label(top) == "100/010"
        assert weights.m[top] == pytest.approx(0.75)
        assert validate_poset(poset, weights).is_valid

    def test_resource_cap(self):
        """Test the element cap during posetification."""
        with pytest.raises(ResourceLimitError):
            posetify(full_simplex(4, 2), 2, max_elements=20)


class TestLinkGraphs:
    """Tests for the oracle link graphs."""

    def test_single_edge_clique(self):
        """Test the walk spectrum of K_3, the G' graph of one edge at q=2."""
        spectrum = link_graph_gprime(BipartiteGraphSpec.single_edge(), 2).spectrum()
        assert spectrum == pytest.approx([1.0, -0.5, -0.5])

    def test_bouquet(self):
        """Test the spectrum of two triangles glued at a hub."""
        spectrum = bouquet_graph(2, 2).spectrum()
        assert spectrum == pytest.approx([1.0, 0.5, -0.5, -0.5, -0.5])

    def test_gprime_of_hexagon(self):
        """Test G' of the 6-cycle over F_2."""
        spectrum = link_graph_gprime(BipartiteGraphSpec.cycle(6), 2).spectrum()
        expected = [1.0, 0.75, 0.75, 0.25, 0.25, 0.0] + [-0.5] * 6
        assert spectrum == pytest.approx(expected, abs=1e-9)

    @pytest.mark.parametrize(
        "q, expected",
        [
            (2, [1.0, 0.75, 0.25] + [-0.5] * 4),
            (3, [1.0, 5 / 6, 0.5] + [-1 / 3] * 7),
        ],
    )
    def test_gprime_of_path(self, q, expected):
        """Test G' of the path on four vertices."""
        spectrum = link_graph_gprime(BipartiteGraphSpec.path(4), q).spectrum()
        assert spectrum == pytest.approx(expected, abs=1e-9)

    def test_odd_cycle_rejected(self):
        """Test that a non-bipartite graph raises NotBipartiteError."""
        with pytest.raises(NotBipartiteError):
            link_graph_gprime(BipartiteGraphSpec.cycle(5), 2)

    def test_disconnected_rejected(self):
        """Test that a disconnected graph is rejected."""
        spec = BipartiteGraphSpec.from_edges([(0, 1), (2, 3)])
        with pytest.raises(NotBipartiteError):
            spec.validate()

    def test_bouquet_needs_a_clique(self):
        """Test that p must be positive."""
        with pytest.raises(BadArgumentsError):
            bouquet_graph(0, 2)
