"""Exact invariants of complex line arrangements.

Computes combinatorial incidence data, braided wiring diagrams over the
cyclotomic field Q(w) (w a primitive cube root of unity), group presentations
of arrangement complements, level-2 truncated commutator invariants, integer
obstruction systems for homology-preserving isomorphisms, and combinatorial
rigidity certificates.  All arithmetic is exact; every randomized step is
seeded and every certificate re-verifiable.
"""

__version__ = "0.1.0"
