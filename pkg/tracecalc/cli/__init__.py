"""CLI module for tracecalc."""
