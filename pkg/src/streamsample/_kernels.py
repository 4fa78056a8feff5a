"""Compiled inner loops shared by the samplers.

Each function takes the caller's ``numpy.random.Generator`` and draws from
it directly, so the jitted loops and the interpreted per-item paths consume
one PCG64 stream.  The plain-Python originals stay reachable through the
dispatchers' ``.py_func`` attribute; the scalar observe() paths call those
to guarantee both ingestion modes run the exact same logic.

Conventions used throughout:

- ``res_pos[slot]`` records the chunk-local index of the last stream item
  written into ``slot`` during one kernel call (-1 when untouched); the
  owning sampler resolves these into payloads after the call returns.
- slot picks use floor(u * n): granularity 2**-53, which is the standard
  trade for exact-integer rejection sampling in hot loops.
- uniforms feeding a division or a root are redrawn on exact zero, and any
  priority or threshold that still overflows is clamped to the largest
  finite double (a clamped entry simply never loses again, the correct
  limiting behaviour).
"""

from __future__ import annotations

import numpy as np
from numba import njit
from numba.extending import register_jitable

FLOAT_MAX = np.finfo(np.float64).max


@register_jitable(inline="always")
def uniform_open(gen):
    u = gen.random()
    while u == 0.0:
        u = gen.random()
    return u


@register_jitable(inline="always")
def _trunc_binomial_tail(gen, m, p, u):
    # Inversion walk over the renormalized cdf, continuing with the same
    # uniform that already missed the k=1 squeeze.  Exact for any u.
    a = np.exp((m - 1) * np.log1p(-p))  # (1-p)**(m-1), cheaper than pow
    z = 1.0 - a * (1.0 - p)
    pk = m * p * a
    cdf = pk / z
    k = 1
    r = p / (1.0 - p)
    while u > cdf and k < m:
        pk *= (m - k) * r / (k + 1)
        cdf += pk / z
        k += 1
    return k


@register_jitable
def trunc_binomial(gen, m, p):
    """Binomial(m, p) conditioned on a strictly positive outcome.

    m <= 64: inversion on the renormalized cdf.  Larger m: rejection on the
    plain binomial once the mean m*p clears 32 (the k=0 retry is then never
    taken in practice), inversion below that (expected iterations stay
    bounded by the mean).  The inversion branch opens with a squeeze --
    accept k=1 when u <= 1-(m-1)p, a lower bound on P(k=1 | k>=1) -- and
    reuses the same uniform for the full cdf walk, so the result is exact.
    """
    if p >= 1.0:
        return m
    if m == 1:
        return 1
    if m > 64 and p * m >= 32.0:
        k = gen.binomial(m, p)
        while k == 0:
            k = gen.binomial(m, p)
        return k
    u = gen.random()
    if u <= 1.0 - (m - 1) * p:
        return 1
    return _trunc_binomial_tail(gen, m, p, u)


@register_jitable
def select_distinct(gen, m, k, perm, stamp, eid, out):
    """Write k distinct uniform slot ids from range(m) into out[:k].

    Stamped partial Fisher-Yates over a virtual identity permutation:
    O(k) time, no allocation, `stamp`/`perm` are persistent m-sized
    scratch arrays and `eid` a caller-incremented event id.
    """
    if k == 1:
        out[0] = np.int64(gen.random() * m)
        return
    if k == 2:
        a = np.int64(gen.random() * m)
        b = np.int64(gen.random() * m)
        while b == a:
            b = np.int64(gen.random() * m)
        out[0] = a
        out[1] = b
        return
    for j in range(k):
        r = j + np.int64(gen.random() * (m - j))
        vr = perm[r] if stamp[r] == eid else r
        vj = perm[j] if stamp[j] == eid else j
        out[j] = vr
        perm[r] = vj
        stamp[r] = eid


@register_jitable(inline="always")
def skip_threshold(gen, total, inv_m):
    """Next acceptance target: total / q**(1/m) for a fresh q in (0, 1)."""
    x = -np.log(uniform_open(gen)) * inv_m
    if x >= 709.0:  # exp would overflow regardless of the total
        return FLOAT_MAX
    t = total * np.exp(x)
    if t == np.inf:
        t = FLOAT_MAX
    return t


@register_jitable
def heap_replace_min(prio, slot, new_priority, m):
    """Replace the root of the (priority, slot) min-heap and sift down.

    Top-down with early exit: the walk stops at the first level where the
    new key already fits, which spares the deepest (cache-hostile) levels
    for mid-sized keys.  Returns the evicted slot id; the new entry is
    re-keyed for that same slot.
    """
    s = slot[0]
    pos = 0
    while True:
        child = 2 * pos + 1
        if child >= m:
            break
        right = child + 1
        if right < m and prio[right] < prio[child]:
            child = right
        if prio[child] >= new_priority:
            break
        prio[pos] = prio[child]
        slot[pos] = slot[child]
        pos = child
    prio[pos] = new_priority
    slot[pos] = s
    return s


@njit(cache=True)
def heap_build(gen, total, prio, slot):
    """Fill slot i with priority total/q_i (fresh q each) and heapify."""
    m = prio.shape[0]
    for i in range(m):
        pr = total / uniform_open(gen)
        if pr == np.inf:
            pr = FLOAT_MAX
        prio[i] = pr
        slot[i] = i
    for start in range((m - 2) // 2, -1, -1):
        rp = prio[start]
        rs = slot[start]
        pos = start
        while True:
            child = 2 * pos + 1
            if child >= m:
                break
            right = child + 1
            if right < m and prio[right] < prio[child]:
                child = right
            if prio[child] >= rp:
                break
            prio[pos] = prio[child]
            slot[pos] = slot[child]
            pos = child
        prio[pos] = rp
        slot[pos] = rs


@njit(cache=True)
def skip_run(gen, weights, m, state, res_pos, perm, stamp, sel, eid):
    """Consume one weight chunk with the skip sampler.

    state = [running total, pending threshold]; accepts whenever the total
    reaches the threshold, places the item into k > 0 slots and draws the
    next threshold.  The common single-slot case is unrolled in place; the
    draw sequence is identical to trunc_binomial + select_distinct.
    Returns the updated event id.
    """
    W = state[0]
    threshold = state[1]
    inv_m = 1.0 / m
    n = weights.shape[0]
    for i in range(n):
        w = weights[i]
        W += w
        if W >= threshold:
            p = w / W
            k = 1
            if m > 1:
                if m > 64 and p * m >= 32.0:
                    k = gen.binomial(m, p)
                    while k == 0:
                        k = gen.binomial(m, p)
                else:
                    u = gen.random()
                    if u > 1.0 - (m - 1) * p:
                        k = _trunc_binomial_tail(gen, m, p, u)
            if k == 1:
                res_pos[np.int64(gen.random() * m)] = i
            else:
                eid += 1
                select_distinct(gen, m, k, perm, stamp, eid, sel)
                for j in range(k):
                    res_pos[sel[j]] = i
            threshold = skip_threshold(gen, W, inv_m)
    state[0] = W
    state[1] = threshold
    return eid


@njit(cache=True)
def heap_run(gen, weights, m, state, prio, slot, res_pos):
    """Consume one weight chunk with the priority-queue sampler.

    While the minimum priority falls below the updated total, evict it and
    re-key that slot at total/q with a fresh q.  The current minimum is
    carried in a register so the steady-state loop never touches the heap.
    """
    W = state[0]
    pmin = prio[0]
    n = weights.shape[0]
    for i in range(n):
        W += weights[i]
        while pmin < W:
            npr = W / uniform_open(gen)
            if npr == np.inf:
                npr = FLOAT_MAX
            s = heap_replace_min(prio, slot, npr, m)
            res_pos[s] = i
            pmin = prio[0]
    state[0] = W


@njit(cache=True)
def basic_bernoulli_run(gen, weights, m, state, res_pos):
    """Literal per-slot Bernoulli trials, one uniform per slot in slot order."""
    W = state[0]
    for i in range(weights.shape[0]):
        w = weights[i]
        W += w
        p = w / W
        for s in range(m):
            if gen.random() < p:
                res_pos[s] = i
    state[0] = W


@njit(cache=True)
def basic_binomial_run(gen, weights, m, state, res_pos, perm, stamp, sel, eid):
    """Equivalent binomial form: k ~ Binomial(m, w/W) slots replaced at once."""
    W = state[0]
    for i in range(weights.shape[0]):
        w = weights[i]
        W += w
        k = gen.binomial(m, w / W)
        if k > 0:
            eid += 1
            select_distinct(gen, m, k, perm, stamp, eid, sel)
            for j in range(k):
                res_pos[sel[j]] = i
    state[0] = W
    return eid


# The primitives above are register_jitable: called from interpreted code
# they are ordinary Python functions (the scalar observe() paths, and the
# tests, which script them with fake generators); called from the jitted
# kernels they are compiled and inlined.  These aliases mark interpreted
# call sites.
uniform_open_py = uniform_open
trunc_binomial_py = trunc_binomial
select_distinct_py = select_distinct
skip_threshold_py = skip_threshold
heap_replace_min_py = heap_replace_min
