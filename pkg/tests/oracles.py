"""Closed-form references written independently of the package."""

import numpy as np


def backward_recursion(h, gammas, sigma2=1.0):
    """Layer powers without eavesdroppers, every beam matched to ``h``.

    Layer ``i`` sees the higher layers through the same gain ``||h||^2`` as
    its own signal, so ``p_i = Gamma_i (sigma2 / ||h||^2 + sum_{j>i} p_j)``,
    filled from the top layer down.
    """
    nh = float(np.sum(np.abs(h) ** 2))
    p = np.zeros(len(gammas))
    for i in reversed(range(len(gammas))):
        p[i] = gammas[i] * (sigma2 / nh + p[i + 1:].sum())
    return p
