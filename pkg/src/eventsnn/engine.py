"""Deterministic cycle-accurate simulation of integer spiking networks.

Each cycle executes four steps in a fixed order:

1. fire:      every neuron flagged on the previous cycle fires now; it is
              recorded, its potential resets to 0, and each outgoing synapse
              (weight w, delay d) schedules w for delivery on cycle c + d.
2. integrate: external spikes for this cycle (+1 each) and every delivery
              scheduled for this cycle are added to target potentials.
3. threshold: any neuron whose potential is strictly greater than its
              threshold is flagged to fire on the next cycle.
4. leak:      leak-enabled neurons drop their remaining potential to 0; a
              flag set in step 3 survives.

Everything is exact integer arithmetic, so identical inputs always produce
identical fire records.  One Engine is single-threaded; run independent
Engine instances for parallelism.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import ScheduleError
from .network import Network, require_valid

__all__ = ["SpikeSchedule", "FireRecord", "EngineState", "Engine", "run_network"]


@dataclass(frozen=True)
class SpikeSchedule:
    """External input spikes: (cycle, neuron id) pairs, +1 charge each.

    Duplicate pairs are honoured with multiplicity; the builders in this
    package never emit duplicates.
    """

    entries: tuple[tuple[int, int], ...]

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[int, int]]) -> "SpikeSchedule":
        return cls(tuple((int(c), int(n)) for c, n in pairs))

    @property
    def max_cycle(self) -> int:
        """Largest scheduled cycle, or -1 for an empty schedule."""
        return max((c for c, _ in self.entries), default=-1)

    def restricted(self, n_cycles: int) -> "SpikeSchedule":
        """Drop entries at cycle >= n_cycles (they could never be observed)."""
        return SpikeSchedule(tuple(e for e in self.entries if e[0] < n_cycles))


@dataclass(frozen=True)
class FireRecord:
    """Fire cycles per neuron id, strictly increasing; at most one per cycle."""

    fires: Mapping[int, tuple[int, ...]]
    n_cycles: int

    def cycles(self, neuron_id: int) -> tuple[int, ...]:
        return self.fires.get(neuron_id, ())

    def fired(self, neuron_id: int) -> bool:
        return neuron_id in self.fires

    def count(self, neuron_id: int) -> int:
        return len(self.fires.get(neuron_id, ()))

    def first(self, neuron_id: int) -> int | None:
        cycles = self.fires.get(neuron_id)
        return cycles[0] if cycles else None

    def as_pairs(self) -> list[tuple[int, int]]:
        """All fires as (cycle, neuron id), sorted by cycle then neuron."""
        pairs = [(c, nid) for nid, cs in self.fires.items() for c in cs]
        pairs.sort()
        return pairs

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FireRecord):
            return NotImplemented
        return self.n_cycles == other.n_cycles and dict(self.fires) == dict(other.fires)


@dataclass(frozen=True)
class EngineState:
    """Snapshot of mutable engine state at a cycle boundary."""

    cycle: int
    potentials: dict[int, int]
    pending: tuple[int, ...]
    queued: tuple[tuple[int, int, int], ...]  # (delivery cycle, neuron id, weight)

    @property
    def is_clear(self) -> bool:
        return (
            self.cycle == 0
            and not self.pending
            and not self.queued
            and not any(self.potentials.values())
        )


class Engine:
    """Simulator instance bound to one validated network.

    ``run`` always starts from cleared state.  After a run the residual state
    (leftover potentials, pending flags, undelivered charge) stays inspectable
    via ``state`` until the next ``run`` or ``clear``.
    """

    def __init__(self, net: Network):
        require_valid(net)
        self.net = net
        n = len(net.neurons)
        self._n = n
        self._ids = tuple(spec.id for spec in net.neurons)
        self._index = {spec.id: i for i, spec in enumerate(net.neurons)}
        self._thr = tuple(spec.threshold for spec in net.neurons)
        self._leak = tuple(i for i, spec in enumerate(net.neurons) if spec.leak)
        # Neurons with a negative threshold exceed it at rest, so they must be
        # threshold-checked every cycle even when untouched.
        self._neg = tuple(i for i, spec in enumerate(net.neurons) if spec.threshold < 0)
        adj0: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        adjd: list[list[tuple[int, int, int]]] = [[] for _ in range(n)]
        for syn in net.synapses:
            pre = self._index[syn.pre]
            post = self._index[syn.post]
            if syn.delay == 0:
                adj0[pre].append((post, syn.weight))
            else:
                adjd[pre].append((post, syn.weight, syn.delay))
        self._adj0 = tuple(tuple(edges) for edges in adj0)
        self._adjd = tuple(tuple(edges) for edges in adjd)
        self._has_delays = any(self._adjd)
        self._pot = [0] * n
        self._flag = bytearray(n)
        self._pending: list[int] = []
        self._delayed: dict[int, list[tuple[int, int]]] = {}
        self._cycle = 0

    # -- state management ---------------------------------------------------

    def _reset(self) -> None:
        self._pot = [0] * self._n
        self._flag = bytearray(self._n)
        self._pending = []
        self._delayed = {}
        self._cycle = 0

    def clear(self) -> EngineState:
        """Zero potentials, drop pending flags and queued charge, rewind to cycle 0."""
        self._reset()
        return self.state()

    def state(self) -> EngineState:
        ids = self._ids
        queued = sorted(
            (cycle, ids[post], weight)
            for cycle, slot in self._delayed.items()
            for post, weight in slot
        )
        return EngineState(
            cycle=self._cycle,
            potentials={ids[i]: self._pot[i] for i in range(self._n)},
            pending=tuple(sorted(ids[i] for i in self._pending)),
            queued=tuple(queued),
        )

    # -- simulation ----------------------------------------------------------

    def _bucket(self, schedule: SpikeSchedule, n_cycles: int) -> list[list[int] | None]:
        buckets: list[list[int] | None] = [None] * n_cycles
        index = self._index
        for cycle, nid in schedule.entries:
            if not 0 <= cycle < n_cycles:
                raise ScheduleError(
                    f"schedule entry (cycle={cycle}, neuron={nid}) is outside "
                    f"the run of {n_cycles} cycles"
                )
            i = index.get(nid)
            if i is None:
                raise ScheduleError(f"schedule references unknown neuron {nid}")
            slot = buckets[cycle]
            if slot is None:
                slot = buckets[cycle] = []
            slot.append(i)
        return buckets

    def run(self, schedule: SpikeSchedule, n_cycles: int) -> FireRecord:
        """Simulate cycles 0 .. n_cycles-1 from cleared state.

        Every schedule entry must fall inside the run.  Returns the fires
        observed within the run; charge still in flight at the end of the
        last cycle stays queued in the engine state.
        """
        if n_cycles <= 0:
            raise ValueError(f"n_cycles must be positive, got {n_cycles}")
        buckets = self._bucket(schedule, n_cycles)
        self._reset()

        pot = self._pot
        flag = self._flag
        thr = self._thr
        adj0 = self._adj0
        adjd = self._adjd
        leak = self._leak
        neg = self._neg
        delayed = self._delayed
        has_delays = self._has_delays
        pending: list[int] = []
        fired_log: list[tuple[int, int]] = []

        for cycle in range(n_cycles):
            touched: list[int] = []
            # fire: reset everything first so same-cycle deliveries are kept
            if pending:
                for i in pending:
                    pot[i] = 0
                    flag[i] = 0
                    fired_log.append((cycle, i))
                for i in pending:
                    for post, weight in adj0[i]:
                        pot[post] += weight
                        touched.append(post)
                    if has_delays and adjd[i]:
                        for post, weight, delay in adjd[i]:
                            delayed.setdefault(cycle + delay, []).append((post, weight))
                touched += pending
            # integrate
            external = buckets[cycle]
            if external:
                for i in external:
                    pot[i] += 1
                touched += external
            if delayed:
                arrivals = delayed.pop(cycle, None)
                if arrivals:
                    for post, weight in arrivals:
                        pot[post] += weight
                        touched.append(post)
            if neg:
                touched += neg
            # threshold
            pending = []
            for i in touched:
                if pot[i] > thr[i] and not flag[i]:
                    flag[i] = 1
                    pending.append(i)
            # leak (does not cancel a pending fire)
            for i in leak:
                pot[i] = 0

        self._pending = pending
        self._cycle = n_cycles

        ids = self._ids
        fires: dict[int, list[int]] = {}
        for cycle, i in fired_log:
            fires.setdefault(ids[i], []).append(cycle)
        return FireRecord({nid: tuple(cs) for nid, cs in fires.items()}, n_cycles)


def run_network(net: Network, schedule: SpikeSchedule, n_cycles: int) -> FireRecord:
    """One-shot convenience wrapper around ``Engine(net).run(...)``."""
    return Engine(net).run(schedule, n_cycles)
