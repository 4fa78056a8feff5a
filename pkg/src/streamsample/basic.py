"""Reference sampler: per-item, per-slot Bernoulli replacement.

Slow but transparently correct; the behavioural baseline every other
sampler is tested against.  After updating the running total W with the
incoming weight w, each of the m slots is independently replaced by the
new item with probability w/W.  The total is updated first -- the
replacement probability uses the post-update W, which is what makes the
per-item marginal telescope to w_i/W over the whole stream.
"""

from __future__ import annotations

import numpy as np

from . import _kernels as K
from .base import ReservoirSampler

__all__ = ["BernoulliSampler"]


class BernoulliSampler(ReservoirSampler):
    """Weighted with-replacement reservoir via independent slot trials.

    ``method="bernoulli"`` (default) runs the literal per-slot trials, one
    uniform per slot in slot order.  ``method="binomial"`` draws the number
    of replaced slots from Binomial(m, w/W) and then picks that many
    distinct slots uniformly -- the same distribution with O(1) draws per
    item, useful when m is large.  The two methods consume different
    random streams, so replays must fix the method along with the seed.
    """

    algorithm = "basic"

    def __init__(self, size, seed=None, *, rng=None, skip_zero_weights=False,
                 method: str = "bernoulli") -> None:
        super().__init__(size, seed, rng=rng, skip_zero_weights=skip_zero_weights)
        if method not in ("bernoulli", "binomial"):
            raise ValueError(f"unknown method {method!r}")
        self.method = method
        self._state = np.zeros(1, dtype=np.float64)
        if method == "binomial":
            self._perm = np.zeros(self.size, dtype=np.int64)
            self._stamp = np.full(self.size, -1, dtype=np.int64)
            self._sel = np.empty(self.size, dtype=np.int64)
            self._eid = 0

    def _literal_init(self, payload, w: float) -> None:
        self._new_slots(payload)
        self._total.add(w)

    def _run_scalar(self, payload, w: float) -> None:
        self._total.add(w)
        p = w / self._total.value
        gen = self._gen
        if self.method == "bernoulli":
            for s in range(self.size):
                if gen.random() < p:
                    self._write_slot(s, payload)
            return
        k = gen.binomial(self.size, p)
        if k > 0:
            self._eid += 1
            K.select_distinct_py(gen, self.size, int(k), self._perm,
                                 self._stamp, self._eid, self._sel)
            for j in range(int(k)):
                self._write_slot(int(self._sel[j]), payload)

    def _run_kernel(self, weights: np.ndarray) -> None:
        self._state[0] = self._total.value + self._total.compensation
        if self.method == "bernoulli":
            K.basic_bernoulli_run(self._gen, weights, self.size, self._state,
                                  self._res_pos)
        else:
            self._eid = K.basic_binomial_run(self._gen, weights, self.size,
                                             self._state, self._res_pos,
                                             self._perm, self._stamp,
                                             self._sel, self._eid)

    def _kernel_total(self) -> float:
        return float(self._state[0])

    def _start_after_warmup(self) -> None:  # pragma: no cover - never used
        raise AssertionError("the basic sampler does not warm up")
