"""tracecalc test suite."""
