"""prym: exact certificates that six-nodal quartics dominate genus-5 moduli"""

__version__ = "0.1.0"
