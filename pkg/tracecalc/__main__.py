"""
Entry point for running tracecalc as a module: python -m tracecalc
"""

from tracecalc.cli.commands import app

if __name__ == "__main__":
    app()
