"""
Counter-based random streams. A stream is identified by ``(seed, *key)``;
the same key always yields the same numbers and distinct keys never share
a stream, whatever order or process they are drawn in.

Key namespaces (first key element):

    0. Poisson layers: ``(0, layer_index, replicate)``
    1. Wiener increments: ``(1, replicate)``
    2. Brownian bridge refinement: ``(2, replicate)``
    3. Norm probes: ``(3, probe_id)``
    4. Integrand families: ``(4, replicate)``
    5. Quasi-geostrophic noise and initial data: ``(5, ...)``
"""
import numpy as np

from errors import ArgumentError

LAYERS = 0
WIENER = 1
BRIDGE = 2
PROBES = 3
FAMILIES = 4
QGE = 5


def stream(seed, *key):
    """
    Build an independent generator for a stream key.

    Args:
        seed (int): The experiment seed. Must be non-negative.
        *key (int): Stream coordinates, see the module docstring.

    Returns:
        :class:`numpy.random.Generator` backed by a Philox counter.
    """
    if seed < 0 or any(k < 0 for k in key):
        raise ArgumentError(
            'seed and stream key must be non-negative, got {} {}'.format(
                seed, key
            )
        )

    entropy = [int(seed)] + [int(k) for k in key]
    bits = np.random.Philox(np.random.SeedSequence(entropy))
    return np.random.Generator(bits)
