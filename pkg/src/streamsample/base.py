"""Common machinery for the single-stream reservoir samplers.

A sampler is single-threaded: no concurrent mutation of one instance.
Instances are cheap to move between threads, which is how the parallel
merge runs one sampler per stream.

Two ingestion paths exist and both are deterministic for a fixed seed:

- ``observe(payload, weight)`` handles one item at a time in pure Python
  (the running total is compensated per item);
- ``observe_many(payloads, weights)`` hands a whole chunk to a compiled
  kernel (plain accumulation inside the call, compensation carried across
  calls).

Both paths run the same sampling logic and draw from the same generator
in the same order, so for weights whose partial sums are exactly
representable the two produce bit-identical reservoirs.  In general they
may differ in the last ulp of the running total and are therefore two
distinct deterministic modes; replay must use the feeding pattern of the
original run.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .core import (
    EmptyStreamError,
    RunningTotal,
    check_weight,
    check_weight_array,
    ensure_rng,
    fresh_seed,
    weighted_indices,
)

__all__ = ["ReservoirSampler", "DEFAULT_CHUNK"]

DEFAULT_CHUNK = 8192


class ReservoirSampler:
    """Base class: fixed-capacity with-replacement sample over one stream.

    Subclasses implement ``_literal_init``, ``_start_after_warmup``,
    ``_run_scalar`` and ``_run_kernel``.  Slot order in the reservoir
    carries no meaning; duplicates are expected (sampling is with
    replacement).
    """

    algorithm = "?"

    def __init__(
        self,
        size: int,
        seed: int | None = None,
        *,
        rng: np.random.Generator | None = None,
        skip_zero_weights: bool = False,
    ) -> None:
        if not isinstance(size, (int, np.integer)) or size < 1:
            raise ValueError(f"sample size must be a positive integer, got {size!r}")
        self.size = int(size)
        if rng is not None:
            self.seed = None
            self._gen = rng
        else:
            self.seed = fresh_seed() if seed is None else int(seed)
            self._gen = ensure_rng(self.seed)
        self.skip_zero_weights = bool(skip_zero_weights)
        self.skipped_zero_weights = 0
        self._total = RunningTotal()
        self._slots: np.ndarray | None = None
        self._res_pos: np.ndarray | None = None
        self._started = False
        # warm-up buffer: (payload_seq, weight_seq) parts in arrival order
        self._warm_parts: list | None = None
        self._warm_count = 0
        self._warm_weight = 0.0

    # -- introspection ----------------------------------------------------

    @property
    def items_seen(self) -> int:
        """Number of stream items consumed (lenient-skipped zeros excluded)."""
        return self._total.count + self._warm_count

    @property
    def total_weight(self) -> float:
        """Sum of the consumed weights."""
        return self._total.value + self._total.compensation + self._warm_weight

    def __repr__(self) -> str:
        return (
            f"{type(self).__name__}(size={self.size}, algorithm={self.algorithm!r}, "
            f"items_seen={self.items_seen})"
        )

    # -- ingestion --------------------------------------------------------

    def observe(self, payload, weight) -> None:
        """Feed one stream item."""
        if not check_weight(weight, self._presented_index(), skip_zero=self.skip_zero_weights):
            self.skipped_zero_weights += 1
            return
        w = float(weight)
        if self._warm_parts is not None:
            self._warm_parts.append(((payload,), (w,)))
            self._warm_count += 1
            self._warm_weight += w
            if self._warm_count == self.size:
                self._finish_warmup()
            return
        if not self._started:
            self._literal_init(payload, w)
            self._started = True
            return
        self._run_scalar(payload, w)

    def observe_many(self, payloads: Sequence, weights) -> None:
        """Feed a chunk of items; ``weights`` is converted to float64."""
        w = np.ascontiguousarray(weights, dtype=np.float64)
        if w.ndim != 1:
            raise ValueError("weights must be one-dimensional")
        if len(payloads) != w.shape[0]:
            raise ValueError(
                f"payloads ({len(payloads)}) and weights ({w.shape[0]}) differ in length"
            )
        w, keep = check_weight_array(
            w, self._presented_index(), skip_zero=self.skip_zero_weights
        )
        if keep is not None:
            self.skipped_zero_weights += int(keep.size - w.size)
            payloads = self._mask_payloads(payloads, keep)
        if w.size == 0:
            return
        offset = 0
        if self._warm_parts is not None:
            take = min(self.size - self._warm_count, w.size)
            self._warm_parts.append((payloads[:take], w[:take]))
            self._warm_count += take
            self._warm_weight += float(w[:take].sum())
            offset = take
            if self._warm_count == self.size:
                self._finish_warmup()
            if offset == w.size:
                return
        if not self._started:
            self._literal_init(payloads[offset], float(w[offset]))
            self._started = True
            offset += 1
            if offset == w.size:
                return
        chunk_w = w[offset:] if offset else w
        if self._res_pos is None:
            self._res_pos = np.full(self.size, -1, dtype=np.int64)
        self._run_kernel(chunk_w)
        self._total.rebase(self._kernel_total(), chunk_w.shape[0])
        self._resolve_writes(payloads, offset)

    def consume(self, items: Iterable, chunk_size: int = DEFAULT_CHUNK) -> "ReservoirSampler":
        """Drain an iterable of (payload, weight) pairs in one pass.

        Items are batched into fixed-size chunks and fed through
        :meth:`observe_many`; the batch size is constant so replays with
        the same seed are reproducible.
        """
        payloads: list = []
        weights: list = []
        for payload, weight in items:
            payloads.append(payload)
            weights.append(weight)
            if len(payloads) == chunk_size:
                self.observe_many(payloads, weights)
                payloads.clear()
                weights.clear()
        if payloads:
            self.observe_many(payloads, weights)
        return self

    # -- export -----------------------------------------------------------

    def sample(self) -> list:
        """The current reservoir as a list of payloads.

        Converts a pending partial warm-up buffer first (the proportional
        law holds for streams shorter than the capacity).  Raises
        :class:`EmptyStreamError` before the first item.
        """
        if self._warm_parts is not None and self._warm_count:
            self._finish_warmup()
        if not self._started:
            raise EmptyStreamError("no items observed")
        return list(self._slots)

    def finish(self) -> list:
        """Alias for :meth:`sample`; reads naturally at end of stream."""
        return self.sample()

    def summary(self):
        """Export (reservoir, total weight, item count) for a later merge."""
        from .merge import StreamSummary

        reservoir = self.sample()
        return StreamSummary(
            reservoir=reservoir,
            total_weight=self.total_weight,
            item_count=self.items_seen,
        )

    # -- internals --------------------------------------------------------

    def _presented_index(self) -> int:
        return self.items_seen + self.skipped_zero_weights

    @staticmethod
    def _mask_payloads(payloads: Sequence, keep: np.ndarray):
        if isinstance(payloads, np.ndarray):
            return payloads[keep]
        return [p for p, k in zip(payloads, keep) if k]

    def _new_slots(self, fill) -> None:
        slots = np.empty(self.size, dtype=object)
        slots[:] = fill
        self._slots = slots

    def _write_slot(self, s: int, payload) -> None:
        try:
            self._slots[s] = payload
        except (ValueError, TypeError):
            # typed reservoir met an incompatible payload; fall back to object
            self._slots = self._slots.astype(object)
            self._slots[s] = payload

    def _resolve_writes(self, payloads: Sequence, offset: int) -> None:
        changed = np.nonzero(self._res_pos >= 0)[0]
        if changed.size == 0:
            return
        pos = self._res_pos[changed] + offset
        if isinstance(payloads, np.ndarray):
            try:
                self._slots[changed] = payloads[pos]
            except (ValueError, TypeError):
                self._slots = self._slots.astype(object)
                self._slots[changed] = payloads[pos]
        else:
            for s, i in zip(changed, pos):
                self._write_slot(int(s), payloads[i])
        self._res_pos[changed] = -1

    def _begin_warmup(self) -> None:
        self._warm_parts = []

    def _finish_warmup(self) -> None:
        parts = self._warm_parts
        if len(parts) == 1:
            pay, wts = parts[0]
            wbuf = np.ascontiguousarray(wts, dtype=np.float64)
        else:
            wbuf = np.concatenate(
                [np.asarray(wts, dtype=np.float64) for _, wts in parts]
            )
            if all(isinstance(p, np.ndarray) for p, _ in parts):
                pay = np.concatenate([p for p, _ in parts])
            else:
                pay = []
                for p, _ in parts:
                    pay.extend(p)
        idx = weighted_indices(wbuf, self.size, self._gen)
        if isinstance(pay, np.ndarray):
            self._slots = pay[idx]
        else:
            slots = np.empty(self.size, dtype=object)
            for s in range(self.size):
                slots[s] = pay[idx[s]]
            self._slots = slots
        # pairwise summation keeps the buffer total within the compensated
        # error bound; the per-item path resumes Kahan from here
        self._total.rebase(float(wbuf.sum()), self._warm_count)
        self._warm_parts = None
        self._warm_count = 0
        self._warm_weight = 0.0
        self._started = True
        self._start_after_warmup()

    def _kernel_total(self) -> float:
        raise NotImplementedError

    def _literal_init(self, payload, w: float) -> None:
        raise NotImplementedError

    def _start_after_warmup(self) -> None:
        raise NotImplementedError

    def _run_scalar(self, payload, w: float) -> None:
        raise NotImplementedError

    def _run_kernel(self, weights: np.ndarray) -> None:
        raise NotImplementedError
