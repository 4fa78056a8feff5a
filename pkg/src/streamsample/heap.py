"""Priority-queue sampler: m single-element without-replacement instances.

Each reservoir slot behaves like an independent single-element weighted
sampler.  Tracking all m instances jointly in a min-heap keyed by W/q
avoids scanning every instance per item: an instance needs to replace its
element exactly when its key falls below the updated running total, so
only the heap minimum is ever inspected.  Evicted slots are re-keyed at
W/q with a fresh q per eviction (one incoming item may claim several
slots; each gets its own draw).

Keys conditional on survival are distributed exactly as fresh draws at
the current total, which is why the warm-up conversion may re-key every
slot afterwards without disturbing the output law.
"""

from __future__ import annotations

import numpy as np

from . import _kernels as K
from .base import ReservoirSampler

__all__ = ["HeapSampler"]


class HeapSampler(ReservoirSampler):
    """Weighted with-replacement reservoir on a min-priority queue.

    ``warmup=True`` (default) buffers the first m stream items verbatim,
    converts them into a with-replacement sample in one step and only then
    starts the heap -- the early phase of the literal algorithm is nothing
    but replacements, and the conversion removes it.  Disable for
    differential testing against the literal procedure.
    """

    algorithm = "heap"
    _uses_warmup = True

    def __init__(self, size, seed=None, *, rng=None, skip_zero_weights=False,
                 warmup: bool = True) -> None:
        super().__init__(size, seed, rng=rng, skip_zero_weights=skip_zero_weights)
        self.warmup = bool(warmup)
        self._state = np.zeros(1, dtype=np.float64)
        self._prio = np.empty(self.size, dtype=np.float64)
        self._heap_slot = np.empty(self.size, dtype=np.int64)
        if self.warmup:
            self._begin_warmup()

    @property
    def min_priority(self) -> float:
        return float(self._prio[0])

    def _literal_init(self, payload, w: float) -> None:
        self._new_slots(payload)
        self._total.add(w)
        K.heap_build(self._gen, self._total.value, self._prio, self._heap_slot)

    def _start_after_warmup(self) -> None:
        K.heap_build(self._gen, self._total.value, self._prio, self._heap_slot)

    def _run_scalar(self, payload, w: float) -> None:
        self._total.add(w)
        W = self._total.value
        prio = self._prio
        gen = self._gen
        while prio[0] < W:
            npr = W / K.uniform_open_py(gen)
            if npr == np.inf:
                npr = K.FLOAT_MAX
            s = K.heap_replace_min_py(prio, self._heap_slot, npr, self.size)
            self._write_slot(int(s), payload)

    def _run_kernel(self, weights: np.ndarray) -> None:
        self._state[0] = self._total.value + self._total.compensation
        K.heap_run(self._gen, weights, self.size, self._state, self._prio,
                   self._heap_slot, self._res_pos)

    def _kernel_total(self) -> float:
        return float(self._state[0])
