"""Unit tests for poset_hdx."""
