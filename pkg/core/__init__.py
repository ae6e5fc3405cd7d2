"""
RTO Forge - Core Package
Cálculo exacto de RTO (RFC 6298), testigos de convergencia, cotas y simulador de Karn
"""

__version__ = "1.0.0"
