"""tik: exact computational algebra over small prime fields.

The package implements a family of isomorphism problems on multi-way
arrays (tensors, matrix spaces, codes, graphs, forms, algebras, matrix
p-groups), constructive reductions between them with forward witness
maps and backward witness recovery, brute-force decision oracles, and a
search-to-decision loop for alternating matrix space isometry.
"""

__version__ = "0.1.0"

DEFAULT_BUDGET = 10**8
MAX_PRIME = 2**15
