"""
tracecalc - exact trace polynomials and the large-N Segal-Bargmann transform
"""

__version__ = "1.0.0"
__logo__ = "∮"
__banner__ = """\
   ┌─────────────┐
   │  tr(U^k)    │      tracecalc v{version}
   │   ──▶ ν_k   │      trace polynomials · heat semigroups · free Hall transform
   └─────────────┘
"""
