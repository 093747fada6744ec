"""Static description of an integer spiking network, plus its JSON document form.

Networks are immutable after construction and may be shared freely across
threads and processes; all mutable simulation state lives in the engine.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping

from .errors import FormatError, InvalidNetworkError

__all__ = [
    "NeuronSpec",
    "SynapseSpec",
    "Network",
    "validate_network",
    "load_network",
    "save_network",
]


@dataclass(frozen=True)
class NeuronSpec:
    """One integrate-and-fire neuron with an integer threshold.

    A neuron fires on the cycle after its potential strictly exceeds
    ``threshold``.  With ``leak`` enabled, any potential left at the end of a
    cycle is discarded (a pending fire survives the leak).
    """

    id: int
    threshold: int
    leak: bool = False
    label: str | None = None


@dataclass(frozen=True)
class SynapseSpec:
    """Directed edge delivering ``weight`` charge ``delay`` cycles after a fire."""

    pre: int
    post: int
    weight: int
    delay: int = 0


@dataclass(frozen=True)
class Network:
    """Neurons plus synapses, with designated input and output neurons.

    A neuron may appear in both ``inputs`` and ``outputs``.  ``meta`` carries
    free-form provenance such as the builder kind and its parameters.
    """

    neurons: tuple[NeuronSpec, ...]
    synapses: tuple[SynapseSpec, ...]
    inputs: tuple[int, ...] = ()
    outputs: tuple[int, ...] = ()
    meta: Mapping[str, str] = field(default_factory=dict)

    def neuron(self, neuron_id: int) -> NeuronSpec:
        for spec in self.neurons:
            if spec.id == neuron_id:
                return spec
        raise KeyError(f"no neuron with id {neuron_id}")

    def labels(self) -> dict[int, str]:
        """Map neuron id to label, for neurons that have one."""
        return {n.id: n.label for n in self.neurons if n.label is not None}

    def id_of(self, label: str) -> int:
        for spec in self.neurons:
            if spec.label == label:
                return spec.id
        raise KeyError(f"no neuron labelled {label!r}")


def validate_network(net: Network) -> list[str]:
    """Return structural violations, empty if the network is well formed.

    Checks id uniqueness and non-negativity, synapse endpoints, non-negative
    delays, and that input/output lists reference existing neurons.  Callers
    decide whether violations are fatal.
    """
    problems: list[str] = []
    ids: set[int] = set()
    for i, neuron in enumerate(net.neurons):
        if neuron.id < 0:
            problems.append(f"neurons[{i}]: negative id {neuron.id}")
        if neuron.id in ids:
            problems.append(f"neurons[{i}]: duplicate id {neuron.id}")
        ids.add(neuron.id)
    for i, syn in enumerate(net.synapses):
        if syn.pre not in ids:
            problems.append(f"synapses[{i}]: pre endpoint {syn.pre} does not exist")
        if syn.post not in ids:
            problems.append(f"synapses[{i}]: post endpoint {syn.post} does not exist")
        if syn.delay < 0:
            problems.append(f"synapses[{i}]: negative delay {syn.delay}")
    for kind, listed in (("inputs", net.inputs), ("outputs", net.outputs)):
        for i, nid in enumerate(listed):
            if nid not in ids:
                problems.append(f"{kind}[{i}]: neuron {nid} does not exist")
    return problems


# --- JSON document form ---------------------------------------------------
#
# {"neurons":  [{"id": int, "threshold": int, "leak": bool, "label": str?}],
#  "synapses": [{"pre": int, "post": int, "weight": int, "delay": int}],
#  "inputs":   [int],
#  "outputs":  [int],
#  "meta":     {str: str}}


def _want_int(value: Any, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise FormatError(f"{where}: expected an integer, got {value!r}")
    return value


def _want_bool(value: Any, where: str) -> bool:
    if not isinstance(value, bool):
        raise FormatError(f"{where}: expected a boolean, got {value!r}")
    return value


def _want_list(value: Any, where: str) -> list:
    if not isinstance(value, list):
        raise FormatError(f"{where}: expected a list, got {type(value).__name__}")
    return value


def _want_obj(value: Any, where: str) -> dict:
    if not isinstance(value, dict):
        raise FormatError(f"{where}: expected an object, got {type(value).__name__}")
    return value


def _get(obj: dict, key: str, where: str) -> Any:
    if key not in obj:
        raise FormatError(f"{where}: missing required field {key!r}")
    return obj[key]


def network_from_document(doc: Any) -> Network:
    """Build a Network from a decoded JSON document, naming bad fields."""
    top = _want_obj(doc, "$")
    neurons = []
    for i, item in enumerate(_want_list(_get(top, "neurons", "$"), "neurons")):
        where = f"neurons[{i}]"
        obj = _want_obj(item, where)
        label = obj.get("label")
        if label is not None and not isinstance(label, str):
            raise FormatError(f"{where}.label: expected a string, got {label!r}")
        neurons.append(
            NeuronSpec(
                id=_want_int(_get(obj, "id", where), f"{where}.id"),
                threshold=_want_int(_get(obj, "threshold", where), f"{where}.threshold"),
                leak=_want_bool(_get(obj, "leak", where), f"{where}.leak"),
                label=label,
            )
        )
    synapses = []
    for i, item in enumerate(_want_list(_get(top, "synapses", "$"), "synapses")):
        where = f"synapses[{i}]"
        obj = _want_obj(item, where)
        synapses.append(
            SynapseSpec(
                pre=_want_int(_get(obj, "pre", where), f"{where}.pre"),
                post=_want_int(_get(obj, "post", where), f"{where}.post"),
                weight=_want_int(_get(obj, "weight", where), f"{where}.weight"),
                delay=_want_int(_get(obj, "delay", where), f"{where}.delay"),
            )
        )
    inputs = tuple(
        _want_int(v, f"inputs[{i}]")
        for i, v in enumerate(_want_list(_get(top, "inputs", "$"), "inputs"))
    )
    outputs = tuple(
        _want_int(v, f"outputs[{i}]")
        for i, v in enumerate(_want_list(_get(top, "outputs", "$"), "outputs"))
    )
    meta_obj = _want_obj(top.get("meta", {}), "meta")
    meta: dict[str, str] = {}
    for key, value in meta_obj.items():
        if not isinstance(value, str):
            raise FormatError(f"meta[{key!r}]: expected a string, got {value!r}")
        meta[key] = value
    return Network(tuple(neurons), tuple(synapses), inputs, outputs, meta)


def network_to_document(net: Network) -> dict:
    """Inverse of ``network_from_document``; omits absent labels."""
    neurons = []
    for n in net.neurons:
        obj: dict[str, Any] = {"id": n.id, "threshold": n.threshold, "leak": n.leak}
        if n.label is not None:
            obj["label"] = n.label
        neurons.append(obj)
    return {
        "neurons": neurons,
        "synapses": [
            {"pre": s.pre, "post": s.post, "weight": s.weight, "delay": s.delay}
            for s in net.synapses
        ],
        "inputs": list(net.inputs),
        "outputs": list(net.outputs),
        "meta": dict(net.meta),
    }


def load_network(data: bytes | str) -> Network:
    """Parse the JSON document form; raises FormatError on any schema violation."""
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise FormatError(f"network document is not UTF-8: {exc}") from None
    if not data.strip():
        raise FormatError("network document is empty")
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise FormatError(f"network document is not valid JSON: {exc}") from None
    return network_from_document(doc)


def save_network(net: Network) -> bytes:
    """Serialize to the canonical JSON byte form (sorted keys, two-space indent)."""
    text = json.dumps(network_to_document(net), indent=2, sort_keys=True)
    return (text + "\n").encode("utf-8")


def require_valid(net: Network) -> Network:
    """Raise InvalidNetworkError unless ``validate_network`` is clean."""
    problems = validate_network(net)
    if problems:
        raise InvalidNetworkError("; ".join(problems))
    return net
