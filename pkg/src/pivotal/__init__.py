"""Exact normalized-weight pivot rules and the polytopes they generate."""
