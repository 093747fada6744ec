"""CSV forms for spike schedules and fire records, plus ASCII spike tables."""

from __future__ import annotations

import csv
import io
from typing import Callable

from .engine import FireRecord, SpikeSchedule
from .errors import FormatError
from .network import Network

__all__ = [
    "read_schedule",
    "write_schedule",
    "write_fire_record",
    "format_spike_table",
]


def _decode(data: bytes | str, what: str) -> str:
    if isinstance(data, bytes):
        try:
            return data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise FormatError(f"{what} is not UTF-8: {exc}") from None
    return data


def read_schedule(
    data: bytes | str,
    resolve: Callable[[str], int] | None = None,
) -> SpikeSchedule:
    """Parse ``cycle,neuron`` CSV (header optional).

    The neuron column is a neuron id; when ``resolve`` is given, non-integer
    values are resolved through it, which lets schedule files name neurons by
    label.
    """
    text = _decode(data, "schedule")
    entries: list[tuple[int, int]] = []
    for lineno, row in enumerate(csv.reader(io.StringIO(text)), start=1):
        if not row or (len(row) == 1 and not row[0].strip()):
            continue
        if len(row) != 2:
            raise FormatError(f"schedule line {lineno}: expected 2 fields, got {len(row)}")
        cycle_text, neuron_text = (field.strip() for field in row)
        if lineno == 1 and cycle_text.lower() == "cycle":
            continue
        try:
            cycle = int(cycle_text)
        except ValueError:
            raise FormatError(f"schedule line {lineno}: bad cycle {cycle_text!r}") from None
        if cycle < 0:
            raise FormatError(f"schedule line {lineno}: negative cycle {cycle}")
        try:
            neuron = int(neuron_text)
        except ValueError:
            if resolve is None:
                raise FormatError(
                    f"schedule line {lineno}: bad neuron {neuron_text!r}"
                ) from None
            try:
                neuron = resolve(neuron_text)
            except KeyError:
                raise FormatError(
                    f"schedule line {lineno}: unknown neuron {neuron_text!r}"
                ) from None
        entries.append((cycle, neuron))
    return SpikeSchedule(tuple(entries))


def write_schedule(schedule: SpikeSchedule) -> bytes:
    lines = ["cycle,neuron"]
    lines += [f"{cycle},{neuron}" for cycle, neuron in schedule.entries]
    return ("\n".join(lines) + "\n").encode("utf-8")


def write_fire_record(record: FireRecord) -> bytes:
    """``neuron,cycle`` rows sorted by cycle then neuron."""
    lines = ["neuron,cycle"]
    lines += [f"{neuron},{cycle}" for cycle, neuron in record.as_pairs()]
    return ("\n".join(lines) + "\n").encode("utf-8")


def format_spike_table(
    net: Network,
    record: FireRecord,
    schedule: SpikeSchedule | None = None,
    columns: list[str] | None = None,
) -> str:
    """Render fires as a table of ``-``/``*`` cells, one row per cycle.

    Columns default to every labelled neuron in network order.  When a
    schedule is given, an ``applied`` column lists the inputs spiked on each
    cycle.
    """
    labels = net.labels()
    if columns is None:
        columns = [spec.label for spec in net.neurons if spec.label is not None]
    ids = []
    for label in columns:
        ids.append(net.id_of(label))

    applied: dict[int, list[str]] = {}
    if schedule is not None:
        for cycle, nid in schedule.entries:
            applied.setdefault(cycle, []).append(labels.get(nid, str(nid)))

    fire_sets = {nid: set(record.cycles(nid)) for nid in ids}
    rows: list[list[str]] = []
    header = ["cycle"]
    if schedule is not None:
        header.append("applied")
    header += columns
    for cycle in range(record.n_cycles):
        row = [str(cycle)]
        if schedule is not None:
            row.append(" ".join(applied.get(cycle, [])) or "-")
        row += ["*" if cycle in fire_sets[nid] else "-" for nid in ids]
        rows.append(row)

    widths = [max(len(header[i]), *(len(r[i]) for r in rows)) if rows else len(header[i])
              for i in range(len(header))]
    def fmt(row: list[str]) -> str:
        return "  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip()

    lines = [fmt(header), fmt(["-" * w for w in widths])]
    lines += [fmt(row) for row in rows]
    return "\n".join(lines) + "\n"
