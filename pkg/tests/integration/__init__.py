"""Integration tests for poset_hdx."""
