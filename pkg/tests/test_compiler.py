import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ftl.builders import build_eigenstate_circuit, build_floquet_circuit
from ftl.circuit import Circuit, circuit_unitary
from ftl.compiler import DEFAULT_PASSES, FULL_PASSES, compile_circuit
from ftl.gates import cz, h, rx, rz
from ftl.lattice import build_lattice, sample_disorder
from ftl.linalg import unitary_distance

from helpers import random_circuit


def test_unknown_pass_rejected():
    with pytest.raises(ValueError):
        compile_circuit(Circuit(2), passes=("fuse_sq", "zx"))


def test_rz_rx_merge_into_one_u3():
    c = Circuit(1, [rz(0, 0.8), rx(0, 0.3)])
    cc = compile_circuit(c, ("fuse_sq",))
    assert [g.kind for g in cc.circuit.gates] == ["u3"]
    assert np.max(np.abs(circuit_unitary(c) - circuit_unitary(cc.circuit))) < 1e-12


def test_identity_runs_are_dropped():
    c = Circuit(1, [h(0), h(0), rz(0, 0.0)])
    cc = compile_circuit(c, ("fuse_sq",))
    assert cc.circuit.gates == []


def test_cnot_and_crz_expand_to_supported_set():
    from ftl.gates import cnot, crz

    c = Circuit(2, [cnot(0, 1), crz(1, 0, 0.7)])
    cc = compile_circuit(c, ("expand",))
    assert set(cc.circuit.gate_counts()) <= {"h", "cz", "rz"}
    assert unitary_distance(circuit_unitary(c), circuit_unitary(cc.circuit)) < 1e-12


@given(st.integers(0, 10_000))
@settings(max_examples=40, deadline=None)
def test_every_pass_combination_preserves_unitary(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 6))
    circ = random_circuit(seed, n, int(rng.integers(5, 25)))
    reference = circuit_unitary(circ)
    for passes in (
        ("expand",),
        ("expand", "fuse_sq"),
        DEFAULT_PASSES,
        ("expand", "fuse_sq", "layerize", "group_cz", "align"),
        FULL_PASSES,
    ):
        compiled = compile_circuit(circ, passes)
        assert unitary_distance(reference, circuit_unitary(compiled.circuit)) < 1e-9


def test_dd_pass_inserts_pairs_and_preserves_unitary():
    # qubit 2 idles across many CZ layers between its first and last CZ
    c = Circuit(3)
    c.add(cz(0, 2))
    for _ in range(4):
        c.add(h(0)).add(cz(0, 1)).add(h(1))
    c.add(cz(1, 2))
    reference = circuit_unitary(c)
    cc = compile_circuit(c, FULL_PASSES)
    dd = [g for g in cc.circuit.gates if g.tag == "dd"]
    assert dd and len(dd) % 2 == 0
    assert all(g.kind == "rx" and g.params[0] == pytest.approx(np.pi) for g in dd)
    assert unitary_distance(reference, circuit_unitary(cc.circuit)) < 1e-9
    assert cc.stats["dd_gates"] == len(dd)


class TestLayerStructure:
    @pytest.mark.parametrize("seed", range(6))
    def test_layers_alternate_and_stay_disjoint(self, seed):
        circ = random_circuit(seed, 5, 20)
        cc = compile_circuit(circ, FULL_PASSES)
        kinds = cc.layer_kinds
        assert all(not (a == b == "sq") for a, b in zip(kinds, kinds[1:]))
        for kind, layer in cc.layers():
            qubits = [q for g in layer for q in g.qubits]
            assert len(qubits) == len(set(qubits))
            if kind == "cz":
                assert all(g.kind == "cz" for g in layer)
            else:
                assert all(len(g.qubits) == 1 for g in layer)

    def test_cz_groups_avoid_facing_couplers(self):
        lat = build_lattice(3, 6)
        real = sample_disorder(lat, 0.1, 7)
        cc = compile_circuit(
            build_floquet_circuit(lat, real), DEFAULT_PASSES, lattice=lat
        )
        for kind, layer in cc.layers():
            if kind != "cz":
                continue
            for i, a in enumerate(layer):
                for b in layer[i + 1:]:
                    ca = sorted(lat.qubit_coord(q) for q in a.qubits)
                    cb = sorted(lat.qubit_coord(q) for q in b.qubits)
                    horiz_a = ca[0][0] == ca[1][0]
                    horiz_b = cb[0][0] == cb[1][0]
                    if horiz_a and horiz_b:
                        assert not (
                            abs(ca[0][0] - cb[0][0]) == 1 and ca[0][1] == cb[0][1]
                        )
                    if not horiz_a and not horiz_b:
                        assert not (
                            abs(ca[0][1] - cb[0][1]) == 1 and ca[0][0] == cb[0][0]
                        )

    def test_grouping_splits_layers_at_most_in_two(self):
        lat = build_lattice(3, 6)
        real = sample_disorder(lat, 0.1, 7)
        circ = build_floquet_circuit(lat, real)
        before = compile_circuit(circ, ("expand", "fuse_sq", "layerize"))
        after = compile_circuit(circ, DEFAULT_PASSES, lattice=lat)
        assert after.stats["cz_layers"] <= 2 * before.stats["cz_layers"]
        assert after.stats["cz_gates"] == before.stats["cz_gates"]


class TestFloquetPeriodBudget:
    def test_compiled_period_stays_within_cz_budget(self):
        lat = build_lattice(3, 6)
        real = sample_disorder(lat, 0.1, 11)
        cc = compile_circuit(
            build_floquet_circuit(lat, real), DEFAULT_PASSES, lattice=lat
        )
        assert cc.stats["cz_gates"] <= 80

    def test_compiled_period_semantics_on_3x2(self):
        lat = build_lattice(3, 2)
        real = sample_disorder(lat, 0.1, 3)
        circ = build_floquet_circuit(lat, real)
        cc = compile_circuit(circ, FULL_PASSES, lattice=lat)
        assert unitary_distance(circuit_unitary(circ), circuit_unitary(cc.circuit)) < 1e-9

    def test_eigenstate_circuit_compiles_losslessly(self):
        lat = build_lattice(3, 2)
        circ = build_eigenstate_circuit(lat)
        cc = compile_circuit(circ, FULL_PASSES, lattice=lat)
        assert unitary_distance(circuit_unitary(circ), circuit_unitary(cc.circuit)) < 1e-9

    def test_wall_time_estimate(self):
        lat = build_lattice(3, 2)
        real = sample_disorder(lat, 0.0, 2)
        cc = compile_circuit(
            build_floquet_circuit(lat, real),
            DEFAULT_PASSES,
            lattice=lat,
            sq_layer_ns=24.0,
            cz_layer_ns=52.5,
        )
        expected = cc.stats["sq_layers"] * 24.0 + cc.stats["cz_layers"] * 52.5
        assert cc.stats["estimated_ns"] == pytest.approx(expected)
