"""Shared fixtures for the poset_hdx test suite."""

import pytest

from poset_hdx.core.links import LinkTable

from tests.fixtures import posets


@pytest.fixture(scope="session")
def delta4():
    """All triangles on five vertices with standard weights."""
    return posets.delta4()


@pytest.fixture(scope="session")
def grass24():
    """Subspaces of F_2^4 up to dimension 3 with standard weights."""
    return posets.grass_2_4()


@pytest.fixture(scope="session")
def wheel():
    """Six triangles around a hub vertex."""
    return posets.wheel()


@pytest.fixture(scope="session")
def triangle():
    """A single triangle."""
    return posets.triangle()


@pytest.fixture(scope="session")
def perturbed():
    """delta4 with jittered top weights and transition probabilities."""
    return posets.perturbed_delta4()


@pytest.fixture(scope="session")
def square():
    """A square cell, on which property AL fails."""
    return posets.square_cell()


@pytest.fixture
def delta4_table(delta4):
    """Fresh link table of delta4."""
    poset, weights = delta4
    return LinkTable(poset, weights)


@pytest.fixture
def facet_file(tmp_path):
    """Facet file of delta4."""
    path = tmp_path / "delta4.facets"
    lines = ["# all triangles on five vertices"]
    lines += [
        " ".join(str(v) for v in (a, b, c))
        for a in range(1, 6)
        for b in range(a + 1, 6)
        for c in range(b + 1, 6)
    ]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path
