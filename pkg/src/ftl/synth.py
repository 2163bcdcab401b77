"""Evolutionary circuit synthesis for small target unitaries.

The search walks a directed graph whose nodes are gate blocks drawn from
the hardware alphabet (RX, RY, RZ on any qubit, CRZ on any allowed pair).
A candidate circuit is a path in the graph; its angles are optimized by
gradient descent on the unitary-distance loss

    L(theta) = 1 - Re Tr[U_target^dagger U_circuit(theta)] / d      ("real")
    L(theta) = 1 - |Tr[U_target^dagger U_circuit(theta)]| / d       ("modulus")

The best paths of each generation are kept and extended, and the winning
circuit is cleaned up by four reduction passes (drop near-identity gates,
snap special angles, reorder commuting gates, merge neighbours).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .circuit import Circuit, circuit_unitary
from .gates import Gate, gate_matrix
from .linalg import is_unitary, unitary_distance

ROTATION_KINDS = ("rx", "ry", "rz")


@dataclass(frozen=True)
class Block:
    """One graph node: a set of gates applicable in parallel (disjoint qubits)."""

    gates: tuple[tuple[str, tuple[int, ...]], ...]

    def __post_init__(self) -> None:
        used: set[int] = set()
        for kind, qubits in self.gates:
            if set(qubits) & used:
                raise ValueError("gates within a block must act on disjoint qubits")
            used.update(qubits)

    @property
    def param_count(self) -> int:
        return len(self.gates)

    def is_entangler(self) -> bool:
        return any(kind == "crz" for kind, _ in self.gates)


@dataclass(frozen=True)
class BlockGraph:
    """Parallel-gate blocks over ``num_qubits`` with rule-based successions.

    The vocabulary holds one rotation-layer block per axis (the same
    rotation kind applied to every qubit in parallel, one angle each) and
    one block per allowed CRZ pair.  Any block may follow any other except
    an immediate repetition of itself, which would merely merge.
    """

    num_qubits: int
    crz_pairs: tuple[tuple[int, int], ...] = ()

    @classmethod
    def complete(cls, num_qubits: int) -> "BlockGraph":
        pairs = tuple(
            (a, b)
            for a in range(num_qubits)
            for b in range(num_qubits)
            if a != b
        )
        return cls(num_qubits, pairs)

    @classmethod
    def line(cls, num_qubits: int) -> "BlockGraph":
        # one canonical direction per coupler; the reverse CRZ differs only
        # by single-qubit z rotations, which the rotation layers absorb
        pairs = tuple((q, q + 1) for q in range(num_qubits - 1))
        return cls(num_qubits, pairs)

    def all_blocks(self) -> tuple[Block, ...]:
        blocks = [
            Block(tuple((kind, (q,)) for q in range(self.num_qubits)))
            for kind in ROTATION_KINDS
        ]
        blocks += [Block((("crz", pair),)) for pair in self.crz_pairs]
        return tuple(blocks)

    def start_blocks(self) -> tuple[Block, ...]:
        """Designated start nodes: the rotation layers."""
        return tuple(b for b in self.all_blocks() if not b.is_entangler())

    def successors(self, block: Block | None) -> tuple[Block, ...]:
        """Allowed follow-up blocks.

        An entangler is always followed by a rotation layer (two bare
        entanglers in a row commute past each other), and a rotation layer
        is never followed by the same axis again (the pair would merge);
        different-axis rotation layers may stack, composing Euler-style.
        """
        options = self.all_blocks()
        if block is None:
            return self.start_blocks()
        if block.is_entangler():
            return tuple(b for b in options if not b.is_entangler())
        return tuple(b for b in options if b != block)


@dataclass(frozen=True)
class AnsatzPath:
    """A path in the block graph; one variational angle per gate."""

    graph: BlockGraph
    blocks: tuple[Block, ...]

    def __post_init__(self) -> None:
        prev: Block | None = None
        for b in self.blocks:
            if prev is not None and b not in self.graph.successors(prev):
                raise ValueError("consecutive blocks are not joined by a graph edge")
            prev = b

    @property
    def param_count(self) -> int:
        return sum(b.param_count for b in self.blocks)

    def gate_specs(self) -> list[tuple[str, tuple[int, ...]]]:
        return [spec for b in self.blocks for spec in b.gates]

    def to_circuit(self, params: np.ndarray) -> Circuit:
        specs = self.gate_specs()
        if len(params) != len(specs):
            raise ValueError("parameter count does not match the path")
        circ = Circuit(self.graph.num_qubits)
        for (kind, qubits), theta in zip(specs, params):
            circ.add(Gate(kind, qubits, (float(theta),)))
        return circ

    def extended(self, blocks: tuple[Block, ...]) -> "AnsatzPath":
        return AnsatzPath(self.graph, self.blocks + blocks)


@dataclass
class SynthesisResult:
    circuit: Circuit
    params: np.ndarray
    loss: float
    history: list[float]
    loss_form: str


@dataclass
class SynthOptions:
    population: int = 12
    initial_depth: int = 2
    depth_step: int = 1
    generations: int = 12
    max_iters: int = 400
    lr: float = 0.1
    grad_mode: str = "shift"
    loss_form: str = "real"
    seed: int = 0
    target_loss: float = 1e-12
    converge_rtol: float = 1e-8
    # generations the best loss may stay flat (relative change below
    # converge_rtol) before the search stops
    patience: int = 3
    # "clifford": angles start near multiples of pi/2 (entanglers near pi),
    # where parity-ladder structures live; "wide": uniform in +/- pi
    init: str = "clifford"
    # "palindrome" mirrors the sampled block sequence, matching the
    # V R V^dagger structure of Pauli-exponential targets; "free" walks the
    # graph without that prior
    sampler: str = "palindrome"


def _check_target(target: np.ndarray, num_qubits: int) -> np.ndarray:
    target = np.asarray(target, dtype=complex)
    if target.shape != (1 << num_qubits, 1 << num_qubits):
        raise ValueError("target dimension does not match the path qubit count")
    if not is_unitary(target, 1e-8):
        raise ValueError("target is not unitary")
    return target


def _trace_overlap(params: np.ndarray, path: AnsatzPath, target: np.ndarray) -> complex:
    u = circuit_unitary(path.to_circuit(params))
    return complex(np.trace(target.conj().T @ u))


def _loss_from_trace(t: complex, dim: int, form: str) -> float:
    if form == "real":
        return 1.0 - t.real / dim
    if form == "modulus":
        return 1.0 - abs(t) / dim
    raise ValueError(f"unknown loss form {form!r}")


def loss(
    params: np.ndarray,
    path: AnsatzPath,
    target: np.ndarray,
    form: str = "real",
) -> float:
    """Unitary-distance loss of the bound ansatz against the target."""
    target = _check_target(target, path.graph.num_qubits)
    dim = target.shape[0]
    return _loss_from_trace(_trace_overlap(params, path, target), dim, form)


def _traces_with_pi_shifts(
    params: np.ndarray, path: AnsatzPath, target: np.ndarray
) -> tuple[complex, np.ndarray]:
    """Trace overlap at theta and at theta_i +/- pi for every parameter.

    One forward/backward sweep of partial products; the +/- pi evaluations
    reuse the cached prefixes so the full shift-rule gradient costs O(gates).
    """
    specs = path.gate_specs()
    n = path.graph.num_qubits
    mats = []
    for (kind, qubits), theta in zip(specs, params):
        g = Gate(kind, qubits, (float(theta),))
        mats.append(_embed(gate_matrix(g), qubits, n))
    dim = 1 << n
    a = target.conj().T
    # suffix[i] = G_{i-1} ... G_0, prefix[i] = A G_{P-1} ... G_{i+1}
    suffix = [np.eye(dim, dtype=complex)]
    for m in mats[:-1]:
        suffix.append(m @ suffix[-1])
    prefix = [None] * len(mats)
    acc = a
    for i in range(len(mats) - 1, -1, -1):
        prefix[i] = acc
        acc = acc @ mats[i]
    t0 = complex(np.trace(acc))  # acc = A G_{P-1} ... G_0
    shifts = np.empty((len(mats), 2), dtype=complex)
    for i, ((kind, qubits), theta) in enumerate(zip(specs, params)):
        for j, delta in enumerate((math.pi, -math.pi)):
            g = Gate(kind, qubits, (float(theta + delta),))
            m = _embed(gate_matrix(g), qubits, n)
            shifts[i, j] = np.trace(prefix[i] @ m @ suffix[i])
    return t0, shifts


def _embed(m: np.ndarray, qubits: tuple[int, ...], n: int) -> np.ndarray:
    """Dense n-qubit embedding of a small gate matrix."""
    from .statevector import _apply_1q, _apply_2q

    full = np.eye(1 << n, dtype=complex)
    flat = full.reshape(-1)
    if len(qubits) == 1:
        _apply_1q(flat, m, qubits[0] + n)
    else:
        _apply_2q(flat, m, qubits[0] + n, qubits[1] + n)
    return full


def gradient(
    params: np.ndarray,
    path: AnsatzPath,
    target: np.ndarray,
    form: str = "real",
    mode: str = "shift",
    fd_step: float = 1e-5,
) -> np.ndarray:
    """Loss gradient by the parameter-shift rule or central finite differences.

    Every gate generator here satisfies the two-eigenvalue condition, so the
    shift rule ``dT/dtheta_i = [T(theta_i + pi) - T(theta_i - pi)] / 4`` is
    exact for the (linear) trace overlap.
    """
    target = _check_target(target, path.graph.num_qubits)
    dim = target.shape[0]
    params = np.asarray(params, dtype=float)
    if mode == "fd":
        out = np.empty(len(params))
        for i in range(len(params)):
            up = params.copy()
            up[i] += fd_step
            dn = params.copy()
            dn[i] -= fd_step
            out[i] = (
                loss(up, path, target, form) - loss(dn, path, target, form)
            ) / (2.0 * fd_step)
        return out
    if mode != "shift":
        raise ValueError(f"unknown gradient mode {mode!r}")
    t0, shifts = _traces_with_pi_shifts(params, path, target)
    dt = (shifts[:, 0] - shifts[:, 1]) / 4.0
    if form == "real":
        return -dt.real / dim
    if form == "modulus":
        if abs(t0) < 1e-300:
            return np.zeros(len(params))
        return -(t0.conjugate() * dt).real / (abs(t0) * dim)
    raise ValueError(f"unknown loss form {form!r}")


def optimize(
    path: AnsatzPath,
    target: np.ndarray,
    params: np.ndarray | None = None,
    max_iters: int = 400,
    lr: float = 0.1,
    grad_mode: str = "shift",
    loss_form: str = "real",
    target_loss: float = 1e-12,
) -> tuple[np.ndarray, float]:
    """Gradient descent with backtracking line search; loss never increases."""
    target = _check_target(target, path.graph.num_qubits)
    if params is None:
        params = np.zeros(path.param_count)
    params = np.asarray(params, dtype=float).copy()
    if len(params) == 0:
        return params, loss(params, path, target, loss_form)
    current = loss(params, path, target, loss_form)
    if not math.isfinite(current):
        raise ValueError("loss is not finite at the starting point")
    step = lr
    window_anchor = current
    for it in range(max_iters):
        if current < target_loss:
            break
        if it % 40 == 39:  # abandon stalled descents early
            if window_anchor - current < 1e-10:
                break
            window_anchor = current
        g = gradient(params, path, target, loss_form, grad_mode)
        gnorm2 = float(g @ g)
        if gnorm2 < 1e-24:
            break
        accepted = False
        while step >= 1e-9:
            cand = params - step * g
            cand_loss = loss(cand, path, target, loss_form)
            if cand_loss <= current - 1e-4 * step * gnorm2:
                params, current = cand, cand_loss
                accepted = True
                step = min(step * 1.5, 1.0)
                break
            step *= 0.5
        if not accepted:
            break
    return params, current


def neuroevolution_search(
    target: np.ndarray,
    graph: BlockGraph,
    options: SynthOptions = SynthOptions(),
) -> SynthesisResult:
    """Population search over graph paths with per-path gradient refinement.

    Each generation optimizes every member, keeps the best quarter, and
    extends the survivors by ``depth_step`` random successor blocks; the
    best member ever seen is retained, so the history never increases.
    """
    target = _check_target(target, graph.num_qubits)
    if graph.num_qubits > 4:
        raise ValueError("synthesis search is limited to 4 qubits")

    def member_rng(generation: int, index: int) -> np.random.Generator:
        seq = np.random.SeedSequence(
            entropy=options.seed, spawn_key=(generation, index)
        )
        return np.random.Generator(np.random.Philox(seq))

    def random_walk(rng: np.random.Generator, depth: int) -> list[Block]:
        blocks: list[Block] = []
        prev: Block | None = None
        for _ in range(depth):
            opts = graph.successors(prev)
            prev = opts[rng.integers(len(opts))]
            blocks.append(prev)
        return blocks

    rot_blocks = graph.start_blocks()
    ent_blocks = tuple(b for b in graph.all_blocks() if b.is_entangler())

    def euler_triple() -> list[Block]:
        # general single-qubit layer between entanglers, z-y-z style
        by_kind = {b.gates[0][0]: b for b in rot_blocks}
        return [by_kind["rz"], by_kind["ry"], by_kind["rz"]]

    def random_path(rng: np.random.Generator, depth: int) -> AnsatzPath:
        """Sample a path of roughly ``depth`` blocks.

        The palindromic sampler mirrors the walk (Pauli-exponential targets
        have the form V R V^dagger) and separates entanglers by full Euler
        layers; randomness enters through the entangler sequence.
        """
        if options.sampler == "free":
            return AnsatzPath(graph, tuple(random_walk(rng, depth)))
        if options.sampler != "palindrome":
            raise ValueError(f"unknown sampler {options.sampler!r}")
        if not ent_blocks:
            return AnsatzPath(graph, tuple(random_walk(rng, depth)))
        half_ents = max(1, round((depth - 5) / 8))
        half: list[Block] = []
        for _ in range(half_ents):
            half += euler_triple()
            half.append(ent_blocks[rng.integers(len(ent_blocks))])
        half += euler_triple()
        return AnsatzPath(graph, tuple(half + half[-2::-1]))

    _grid = np.array([0.0, math.pi / 2.0, -math.pi / 2.0, math.pi])

    def fresh_angles(
        rng: np.random.Generator, specs: list[tuple[str, tuple[int, ...]]]
    ) -> np.ndarray:
        if options.init == "wide":
            return rng.uniform(-math.pi, math.pi, len(specs))
        if options.init != "clifford":
            raise ValueError(f"unknown init scheme {options.init!r}")
        out = np.empty(len(specs))
        for i, (kind, _) in enumerate(specs):
            if kind == "crz":
                out[i] = (math.pi if rng.integers(2) else -math.pi)
            else:
                out[i] = _grid[rng.integers(4)]
        return out + 0.15 * rng.standard_normal(len(specs))

    population: list[tuple[AnsatzPath, np.ndarray]] = []
    for i in range(options.population):
        rng = member_rng(0, i)
        p = random_path(rng, options.initial_depth)
        population.append((p, fresh_angles(rng, p.gate_specs())))

    best_path: AnsatzPath | None = None
    best_params: np.ndarray | None = None
    best_loss = math.inf
    history: list[float] = []
    flat = 0

    for generation in range(options.generations):
        scored: list[tuple[float, AnsatzPath, np.ndarray]] = []
        for p, init in population:
            params, final_loss = optimize(
                p,
                target,
                init,
                max_iters=options.max_iters,
                lr=options.lr,
                grad_mode=options.grad_mode,
                loss_form=options.loss_form,
                target_loss=options.target_loss,
            )
            scored.append((final_loss, p, params))
        scored.sort(key=lambda item: item[0])
        if scored[0][0] < best_loss:
            best_loss, best_path, best_params = scored[0]
        history.append(best_loss)
        if best_loss < options.target_loss:
            break
        if (
            len(history) >= 2
            and abs(history[-2] - history[-1]) <= options.converge_rtol * max(history[-2], 1e-30)
        ):
            flat += 1
            if flat >= options.patience:
                break
        else:
            flat = 0
        # prolong the survivors; half the offspring restart their angles wide
        keep = max(1, math.ceil(options.population / 4))
        survivors = scored[:keep]
        population = []
        for i in range(options.population):
            rng = member_rng(generation + 1, i)
            src_loss, src_path, src_params = survivors[i % keep]
            blocks: list[Block] = []
            prev = src_path.blocks[-1] if src_path.blocks else None
            for _ in range(options.depth_step):
                opts = graph.successors(prev)
                prev = opts[rng.integers(len(opts))]
                blocks.append(prev)
            new_path = src_path.extended(tuple(blocks))
            specs = new_path.gate_specs()
            if i % 2 == 0 and src_loss > options.target_loss:
                init = fresh_angles(rng, specs)
            else:
                init = np.concatenate(
                    [src_params, fresh_angles(rng, specs[len(src_params):])]
                )
            population.append((new_path, init))

    assert best_path is not None and best_params is not None
    circuit = best_path.to_circuit(best_params)
    return SynthesisResult(circuit, best_params, best_loss, history, options.loss_form)


# ---------------------------------------------------------------------------
# manual reduction passes

@dataclass(frozen=True)
class SimplifyTolerances:
    drop: float = 1e-8       # rotations within this of 0 (mod 2 pi) vanish
    snap: float = 1e-6       # snap angles to multiples of pi/2
    distance: float = 1e-6   # allowed unitary drift of the whole cleanup


def _wrap(theta: float) -> float:
    t = math.fmod(theta, 2.0 * math.pi)
    if t <= -math.pi:
        t += 2.0 * math.pi
    elif t > math.pi:
        t -= 2.0 * math.pi
    return t


def _wrap_gate_angle(kind: str, theta: float) -> float:
    """Reduce a rotation angle to its physically equivalent range.

    Plain rotations are 2 pi periodic up to a global phase; a controlled
    rotation is only 4 pi periodic (the extra 2 pi is a conditional flip).
    """
    if kind == "crz":
        t = math.fmod(theta, 4.0 * math.pi)
        if t <= -2.0 * math.pi:
            t += 4.0 * math.pi
        elif t > 2.0 * math.pi:
            t -= 4.0 * math.pi
        return t
    return _wrap(theta)


def _pass_drop_identity(gates: list[Gate], tol: SimplifyTolerances) -> list[Gate]:
    out = []
    for g in gates:
        if g.kind in ROTATION_KINDS or g.kind == "crz":
            if abs(_wrap_gate_angle(g.kind, g.params[0])) < tol.drop:
                continue
        out.append(g)
    return out


def _pass_snap_special(gates: list[Gate], tol: SimplifyTolerances) -> list[Gate]:
    out = []
    for g in gates:
        if (g.kind in ROTATION_KINDS or g.kind == "crz") and g.tag != "fixed":
            theta = g.params[0]
            nearest = round(theta / (math.pi / 2.0)) * (math.pi / 2.0)
            if theta != nearest and abs(theta - nearest) < tol.snap:
                out.append(Gate(g.kind, g.qubits, (nearest,), tag="fixed"))
                continue
        out.append(g)
    return out


def _gates_commute(a: Gate, b: Gate) -> bool:
    if not set(a.qubits) & set(b.qubits):
        return True
    diagonal = {"rz", "crz", "cz"}
    if a.kind in diagonal and b.kind in diagonal:
        return True
    if a.kind == b.kind and a.qubits == b.qubits:
        return True
    return False


def _pass_reorder_commuting(gates: list[Gate]) -> list[Gate]:
    """Bubble commuting neighbours into a canonical order to expose merges."""
    out = list(gates)
    changed = True
    while changed:
        changed = False
        for i in range(len(out) - 1):
            a, b = out[i], out[i + 1]
            if _gates_commute(a, b) and (b.kind, b.qubits) < (a.kind, a.qubits):
                out[i], out[i + 1] = b, a
                changed = True
    return out


def _pass_merge_neighbors(gates: list[Gate], tol: SimplifyTolerances) -> list[Gate]:
    out: list[Gate] = []
    for g in gates:
        if (
            out
            and g.kind in (*ROTATION_KINDS, "crz")
            and out[-1].kind == g.kind
            and out[-1].qubits == g.qubits
        ):
            prev = out.pop()
            merged = _wrap_gate_angle(g.kind, prev.params[0] + g.params[0])
            if abs(merged) >= tol.drop:
                tag = "fixed" if (prev.tag == "fixed" and g.tag == "fixed") else ""
                out.append(Gate(g.kind, g.qubits, (merged,), tag=tag))
            continue
        out.append(g)
    return out


def simplify(
    circuit: Circuit,
    params: np.ndarray | None = None,
    tolerances: SimplifyTolerances = SimplifyTolerances(),
) -> tuple[Circuit, np.ndarray]:
    """Apply the four reduction passes to fixpoint.

    Returns the reduced circuit and the surviving variational angles (gates
    snapped to special values are frozen out of the parameter vector).  The
    reduced unitary stays within ``tolerances.distance`` of the input.
    """
    gates = list(circuit.gates)
    if params is not None:
        variational = [g for g in gates if g.kind in (*ROTATION_KINDS, "crz")]
        if len(params) != len(variational):
            raise ValueError("parameter vector does not match the circuit")
    reference = circuit_unitary(circuit) if circuit.num_qubits <= 8 else None

    while True:
        before = list(gates)
        gates = _pass_drop_identity(gates, tolerances)
        gates = _pass_snap_special(gates, tolerances)
        gates = _pass_reorder_commuting(gates)
        gates = _pass_merge_neighbors(gates, tolerances)
        if gates == before:
            break

    out = Circuit(circuit.num_qubits, gates, global_phase=circuit.global_phase)
    if reference is not None:
        drift = unitary_distance(reference, circuit_unitary(out))
        if drift > tolerances.distance:
            raise AssertionError(
                f"simplification drifted by {drift:.3e} > {tolerances.distance:.0e}"
            )
    new_params = np.array(
        [
            g.params[0]
            for g in gates
            if g.kind in (*ROTATION_KINDS, "crz") and g.tag != "fixed"
        ]
    )
    return out, new_params
