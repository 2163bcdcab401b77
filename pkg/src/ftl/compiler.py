"""Circuit compilation passes.

The pipeline mirrors what superconducting hardware wants to execute:

* ``expand``    -- rewrite CNOT and CRZ into {single-qubit, CZ} gates;
* ``fuse_sq``   -- merge every maximal run of single-qubit gates into one
                   U3 (identity runs are dropped into the global phase);
* ``layerize``  -- greedy ASAP scheduling into alternating SQ / CZ layers;
* ``group_cz``  -- split each CZ layer into sub-layers so that no two CZs
                   in a group act on neighbouring qubit pairs;
* ``align``     -- delay each qubit's first gate and advance its last one
                   to shrink idle windows at the circuit boundary;
* ``dd``        -- insert X-X dynamical-decoupling pairs into idle windows
                   that span at least two CZ layers.

Every pass preserves the unitary up to global phase.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .circuit import Circuit
from .gates import Gate, cz, euler_decompose, gate_matrix, h, rx, rz, u3

DEFAULT_PASSES = ("expand", "fuse_sq", "layerize", "group_cz")
FULL_PASSES = ("expand", "fuse_sq", "layerize", "group_cz", "align", "dd")

DEFAULT_SQ_LAYER_NS = 24.0
DEFAULT_CZ_LAYER_NS = 52.5


@dataclass
class CompiledCircuit:
    circuit: Circuit
    layer_kinds: list[str]  # "sq" or "cz", aligned with circuit.layers()
    stats: dict = field(default_factory=dict)

    def layers(self) -> list[tuple[str, list[Gate]]]:
        return list(zip(self.layer_kinds, self.circuit.layers()))


# ---------------------------------------------------------------------------
# gate-list passes

def _expand(gates: list[Gate], phase: float) -> tuple[list[Gate], float]:
    out: list[Gate] = []
    for g in gates:
        if g.kind == "cnot":
            c, t = g.qubits
            out += [h(t), cz(c, t), h(t)]
        elif g.kind == "crz":
            c, t = g.qubits
            theta = g.params[0]
            out += [rz(t, theta / 2.0), h(t), cz(c, t), h(t),
                    rz(t, -theta / 2.0), h(t), cz(c, t), h(t)]
        else:
            out.append(g)
    return out, phase


def _fuse_sq(gates: list[Gate], phase: float) -> tuple[list[Gate], float]:
    """Merge consecutive single-qubit gates per qubit into single U3 gates."""
    out: list[Gate] = []
    pending: dict[int, np.ndarray] = {}

    def flush(q: int) -> None:
        m = pending.pop(q, None)
        if m is None:
            return
        nonlocal phase
        tr = np.trace(m)
        if 1.0 - abs(tr) / 2.0 < 1e-15:  # identity up to phase
            phase += math.atan2(tr.imag, tr.real)
            return
        alpha, phi, theta, gamma = euler_decompose(m)
        out.append(u3(q, alpha, phi, theta))
        phase += gamma

    for g in gates:
        if len(g.qubits) == 1:
            q = g.qubits[0]
            m = gate_matrix(g)
            pending[q] = m @ pending[q] if q in pending else m
        else:
            for q in g.qubits:
                flush(q)
            out.append(g)
    for q in sorted(pending):
        flush(q)
    return out, phase


# ---------------------------------------------------------------------------
# layered passes

def _layerize(gates: list[Gate]) -> list[tuple[str, list[Gate]]]:
    """Greedy ASAP scheduling; even slots hold SQ gates, odd slots CZ gates."""
    slots: list[list[Gate]] = []
    busy: list[set[int]] = []
    frontier: dict[int, int] = {}

    def ensure(i: int) -> None:
        while len(slots) <= i:
            slots.append([])
            busy.append(set())

    for g in gates:
        want = 0 if len(g.qubits) == 1 else 1  # parity of the slot
        start = max((frontier.get(q, 0) for q in g.qubits), default=0)
        i = start if start % 2 == want else start + 1
        while True:
            ensure(i)
            if not busy[i].intersection(g.qubits):
                break
            i += 2
        slots[i].append(g)
        busy[i].update(g.qubits)
        for q in g.qubits:
            frontier[q] = i + 1
    return [("sq" if i % 2 == 0 else "cz", layer) for i, layer in enumerate(slots) if layer]


def _group_cz(
    layers: list[tuple[str, list[Gate]]],
    coords,
) -> list[tuple[str, list[Gate]]]:
    """Split each CZ layer into at most two groups of safely parallel CZs.

    Two CZs conflict when their couplers are parallel facing edges of one
    grid cell (the level-crossing hazard for simultaneous operation).  A
    parity colouring resolves every such conflict with two groups:
    horizontal couplers take the parity of their row, vertical couplers the
    parity of their column.  ``coords`` maps a qubit index to (row, col);
    CZs that are not grid edges are left in group 0.
    """
    if coords is None:
        return layers

    def color(g: Gate) -> int:
        (ra, ca), (rb, cb) = coords(g.qubits[0]), coords(g.qubits[1])
        if ra == rb and abs(ca - cb) == 1:  # horizontal coupler
            return ra % 2
        if ca == cb and abs(ra - rb) == 1:  # vertical coupler
            return ca % 2
        return 0

    out: list[tuple[str, list[Gate]]] = []
    for kind, layer in layers:
        if kind != "cz":
            out.append((kind, layer))
            continue
        groups = [[g for g in layer if color(g) == c] for c in (0, 1)]
        for grp in groups:
            if grp:
                out.append(("cz", grp))
    return out


def _occupied(layers: list[tuple[str, list[Gate]]]) -> list[set[int]]:
    return [set(q for g in layer for q in g.qubits) for _, layer in layers]


def _align(layers: list[tuple[str, list[Gate]]]) -> list[tuple[str, list[Gate]]]:
    """Right-align leading SQ gates and left-align trailing SQ gates per qubit."""
    layers = [(k, list(layer)) for k, layer in layers]
    occ = _occupied(layers)

    def move(gate: Gate, src: int, dst: int) -> None:
        layers[src][1].remove(gate)
        layers[dst][1].append(gate)
        occ[src].difference_update(gate.qubits)
        occ[dst].update(gate.qubits)

    qubits = sorted(set(q for o in occ for q in o))
    for q in qubits:
        mine = [i for i, o in enumerate(occ) if q in o]
        cz_idx = [i for i in mine if layers[i][0] == "cz"]
        if not cz_idx:
            continue
        first_cz, last_cz = cz_idx[0], cz_idx[-1]
        # Delay a lone leading SQ gate to just before the qubit's first CZ.
        lead = [i for i in mine if i < first_cz]
        if len(lead) == 1:
            target = max(
                (i for i in range(first_cz - 1, lead[0], -1)
                 if layers[i][0] == "sq" and q not in occ[i]),
                default=None,
            )
            if target is not None:
                gate = next(g for g in layers[lead[0]][1] if q in g.qubits)
                move(gate, lead[0], target)
        # Advance a lone trailing SQ gate to just after the qubit's last CZ.
        occ = _occupied(layers)
        mine = [i for i, o in enumerate(occ) if q in o]
        trail = [i for i in mine if i > last_cz]
        if len(trail) == 1:
            target = min(
                (i for i in range(last_cz + 1, trail[0])
                 if layers[i][0] == "sq" and q not in occ[i]),
                default=None,
            )
            if target is not None:
                gate = next(g for g in layers[trail[0]][1] if q in g.qubits)
                move(gate, trail[0], target)
        occ = _occupied(layers)
    return [(k, layer) for k, layer in layers if layer]


def _dd(layers: list[tuple[str, list[Gate]]]) -> list[tuple[str, list[Gate]]]:
    """Insert an X-X pair, centred, into idle windows spanning >= 2 CZ layers."""
    layers = [(k, list(layer)) for k, layer in layers]
    occ = _occupied(layers)
    all_qubits = sorted(set(q for o in occ for q in o))
    for q in all_qubits:
        mine = [i for i, o in enumerate(occ) if q in o]
        if len(mine) < 2:
            continue
        for a, b in zip(mine, mine[1:]):
            window = list(range(a + 1, b))
            cz_between = sum(1 for i in window if layers[i][0] == "cz")
            if cz_between < 2:
                continue
            sq_free = [i for i in window if layers[i][0] == "sq" and q not in occ[i]]
            if len(sq_free) < 2:
                continue
            k = len(sq_free)
            for i in (sq_free[(k - 1) // 2], sq_free[(k + 1) // 2]):
                gate = Gate("rx", (q,), (math.pi,), tag="dd")
                layers[i][1].append(gate)
                occ[i].add(q)
    return layers


# ---------------------------------------------------------------------------
# driver

def _to_compiled(
    layers: list[tuple[str, list[Gate]]],
    num_qubits: int,
    phase: float,
    sq_layer_ns: float,
    cz_layer_ns: float,
) -> CompiledCircuit:
    circ = Circuit(num_qubits, global_phase=phase)
    kinds: list[str] = []
    for kind, layer in layers:
        if not layer:
            continue
        for g in sorted(layer, key=lambda g: g.qubits):
            circ.add(g)
        circ.barrier()
        kinds.append(kind)
    counts = circ.gate_counts()
    dd_count = sum(1 for g in circ.gates if g.tag == "dd")
    n_sq = sum(1 for k in kinds if k == "sq")
    n_cz = sum(1 for k in kinds if k == "cz")
    stats = {
        "gate_counts": counts,
        "sq_gates": sum(v for k, v in counts.items() if k != "cz") - dd_count,
        "cz_gates": counts.get("cz", 0),
        "dd_gates": dd_count,
        "sq_layers": n_sq,
        "cz_layers": n_cz,
        "estimated_ns": n_sq * sq_layer_ns + n_cz * cz_layer_ns,
    }
    return CompiledCircuit(circ, kinds, stats)


def compile_circuit(
    circuit: Circuit,
    passes: tuple[str, ...] = DEFAULT_PASSES,
    lattice=None,
    sq_layer_ns: float = DEFAULT_SQ_LAYER_NS,
    cz_layer_ns: float = DEFAULT_CZ_LAYER_NS,
) -> CompiledCircuit:
    """Run the requested passes in order and return the layered result.

    ``lattice`` supplies qubit coordinates for the ``group_cz`` pass; without
    it that pass leaves layers untouched.
    """
    known = {"expand", "fuse_sq", "layerize", "group_cz", "align", "dd"}
    for name in passes:
        if name not in known:
            raise ValueError(f"unknown compile pass {name!r}")

    coords = lattice.qubit_coord if lattice is not None else None
    gates = list(circuit.gates)
    phase = circuit.global_phase
    layers: list[tuple[str, list[Gate]]] | None = None
    for name in passes:
        if name == "expand":
            gates, phase = _expand(gates, phase)
        elif name == "fuse_sq":
            gates, phase = _fuse_sq(gates, phase)
        else:
            if layers is None:
                layers = _layerize(gates)
            if name == "group_cz":
                layers = _group_cz(layers, coords)
            elif name == "align":
                layers = _align(layers)
            elif name == "dd":
                layers = _dd(layers)
    if layers is None:
        layers = _layerize(gates)
    return _to_compiled(layers, circuit.num_qubits, phase, sq_layer_ns, cz_layer_ns)
