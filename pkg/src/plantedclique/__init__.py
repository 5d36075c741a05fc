"""Adversarially planted clique instances and the algorithms that crack them.

Submodules: graph (bitset graphs), generate (seeded sampling and planting),
theta (SDP solver), certificate (spectral witness), recovery (theta, guessing
and degree pipelines), enumeration (maximal-clique listing), hardness
(reduction gadgets and pattern planting), oracle (exact references), io
(file formats), cli (command line).
"""

__version__ = "0.1.0"
