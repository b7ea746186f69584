"""Test fixtures for poset_hdx."""
