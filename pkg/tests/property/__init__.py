"""Property-based tests for poset_hdx."""
