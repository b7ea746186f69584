"""Tests for poset_hdx."""
