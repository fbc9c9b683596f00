"""Series solutions of confluent and double-confluent Heun equations.

Expansions in Coulomb wave, cylinder and regular/irregular confluent
hypergeometric bases, with the characteristic equation solved by matched
continued fractions, convergence classification, and the spheroidal, Mathieu,
cosmological and quasi-exactly-solvable applications built on top.
"""

__version__ = "0.1.0"
