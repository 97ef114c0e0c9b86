"""Matrix exponential of small dense matrices by scaling and squaring."""
import math

import numpy as np

_ORDER = 12
_THETA = 0.25  # ||A/2^s||_1 bound; Taylor-12 remainder ~ 0.25^13/13! < 1e-17


def expm(a, order=_ORDER):
    """``exp(a)`` for a square (complex) matrix; truncated Taylor of the given order."""
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("expm needs a square matrix")
    norm = np.max(np.sum(np.abs(a), axis=0)) if a.size else 0.0
    s = max(0, math.ceil(math.log2(norm / _THETA))) if norm > _THETA else 0
    b = a / (2.0**s)
    n = a.shape[0]
    result = np.eye(n, dtype=np.result_type(a, float))
    term = result.copy()
    for k in range(1, order + 1):
        term = term @ b / k
        result = result + term
    for _ in range(s):
        result = result @ result
    return result
