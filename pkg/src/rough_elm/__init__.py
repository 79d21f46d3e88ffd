"""Rough extreme learning machine.

Rough-set attribute reduction and positive-region splitting feed two randomly
initialised ELM hidden layers whose outputs are fused with a min/max swap.
Hot kernels run under numba; set ``ROUGH_ELM_DISABLE_NUMBA=1`` for the pure
numpy path.
"""

__version__ = "0.1.0"
