"""Exact tools for two Lefschetz fibrations with genus-17 fibers.

Modules:
  braid          braid words, Garside normal form, Dynnikov coordinates, free groups
  surface        the marked disk, arcs and curves as passage words, twist braids
  cover          the branched double cover and transvections on capped homology
  genus2         Map2 identity tests and permutation images
  factorization  factor tuples, Hurwitz moves, products at base and homology level
  subgroup       certificates for phi in the twist subgroups, matching-path scan
  cli            the ``twistlab`` command
"""

__version__ = "0.1.0"
