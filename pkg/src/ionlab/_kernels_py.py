"""Pure-Python (NumPy scalar loop) Numerov kernels.

Fallback implementation used when the compiled extension is unavailable.
The arithmetic mirrors the Cython kernels operation for operation so both
backends produce the same trajectories to rounding error.

All kernels integrate v'' = g(x) v on a uniform x mesh with step h via the
three-term Numerov recurrence

    p_{i+1} v_{i+1} = (12 - 10 p_i) v_i - p_{i-1} v_{i-1},   p_i = 1 - h^2 g_i / 12.

Trajectories are rescaled whenever they exceed 1e250 so deep classically
forbidden regions cannot overflow; node counts and shapes are unaffected.
"""

import numpy as np

_SEED = 1e-12
_BIG = 1e250
_SHRINK = 1e-250


def numerov_count_nodes(g, h):
    """Count sign changes of the outward solution of v'' = g v."""
    g = np.asarray(g, dtype=np.float64)
    n = g.shape[0]
    hh12 = h * h / 12.0
    p_prev = 1.0 - hh12 * g[0]
    p_cur = 1.0 - hh12 * g[1]
    v_prev = _SEED
    v_cur = _SEED * np.exp(0.5 * h)
    nodes = 0
    for i in range(1, n - 1):
        p_next = 1.0 - hh12 * g[i + 1]
        v_next = ((12.0 - 10.0 * p_cur) * v_cur - p_prev * v_prev) / p_next
        if v_next * v_cur < 0.0:
            nodes += 1
        v_prev = v_cur
        v_cur = v_next
        p_prev = p_cur
        p_cur = p_next
        if abs(v_cur) > _BIG:
            v_prev *= _SHRINK
            v_cur *= _SHRINK
    return nodes


def numerov_outward(g, h, iend):
    """Outward solution on nodes 0..iend, seeded on the regular branch."""
    g = np.asarray(g, dtype=np.float64)
    hh12 = h * h / 12.0
    v = np.zeros(iend + 1, dtype=np.float64)
    v[0] = _SEED
    v[1] = _SEED * np.exp(0.5 * h)
    for i in range(1, iend):
        p_next = 1.0 - hh12 * g[i + 1]
        p_cur = 1.0 - hh12 * g[i]
        p_prev = 1.0 - hh12 * g[i - 1]
        v[i + 1] = ((12.0 - 10.0 * p_cur) * v[i] - p_prev * v[i - 1]) / p_next
        if abs(v[i + 1]) > _BIG:
            v[: i + 2] *= _SHRINK
    return v


def numerov_inward(g, h, istart):
    """Inward solution on nodes istart..n-1 with a Dirichlet seed at the end."""
    g = np.asarray(g, dtype=np.float64)
    n = g.shape[0]
    hh12 = h * h / 12.0
    m = n - istart
    v = np.zeros(m, dtype=np.float64)
    v[m - 1] = 0.0
    v[m - 2] = _SEED
    for i in range(n - 2, istart, -1):
        j = i - istart
        p_prev = 1.0 - hh12 * g[i - 1]
        p_cur = 1.0 - hh12 * g[i]
        p_next = 1.0 - hh12 * g[i + 1]
        v[j - 1] = ((12.0 - 10.0 * p_cur) * v[j] - p_next * v[j + 1]) / p_prev
        if abs(v[j - 1]) > _BIG:
            v[j - 1 :] *= _SHRINK
    return v
