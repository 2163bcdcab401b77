"""Rotated surface-code geometry and disorder sampling.

Qubits live on the vertices of a ``rows x cols`` grid and are numbered in
serpentine (boustrophedon) order: row 0 runs left to right, row 1 right to
left, and so on.  With 1-based labels on a 3x6 lattice this puts the first
column at qubits {1, 12, 13}, the layout used in all documentation.

Plaquette types follow the usual rotated-surface-code checkerboard:

* interior squares alternate Z-type and X-type;
* two-body Z checks sit on the top/bottom edges, two-body X checks on the
  left/right edges, in the alternating positions that make the stabilizer
  count come out to ``rows * cols - 1``.

Logical Z strings run down the columns (weight ``rows``), logical X strings
along the rows (weight ``cols``).  ``rows`` must be odd so that the Z
strings anticommute with the global spin flip.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .pauli import PauliString, gf2_rank, symplectic_vector


@dataclass(frozen=True)
class Plaquette:
    kind: str  # "z" for a Z-type check (A_p), "x" for an X-type check (B_q)
    qubits: tuple[int, ...]
    group_index: int  # parallel-application group, 0..3

    def __post_init__(self) -> None:
        if self.kind not in ("z", "x"):
            raise ValueError(f"plaquette kind must be 'z' or 'x', got {self.kind!r}")
        if len(self.qubits) not in (2, 4):
            raise ValueError(f"plaquette weight must be 2 or 4, got {len(self.qubits)}")
        if not 0 <= self.group_index < 4:
            raise ValueError("group index out of range")

    @property
    def weight(self) -> int:
        return len(self.qubits)

    def pauli(self, num_qubits: int) -> PauliString:
        if self.kind == "z":
            return PauliString.z_string(num_qubits, self.qubits)
        return PauliString.x_string(num_qubits, self.qubits)


@dataclass(frozen=True)
class Lattice:
    rows: int
    cols: int
    plaquettes: tuple[Plaquette, ...]
    logical_z: tuple[PauliString, ...]
    logical_x: tuple[PauliString, ...]

    @property
    def num_qubits(self) -> int:
        return self.rows * self.cols

    def qubit_index(self, row: int, col: int) -> int:
        if not (0 <= row < self.rows and 0 <= col < self.cols):
            raise ValueError(f"coordinate ({row}, {col}) out of range")
        return row * self.cols + (col if row % 2 == 0 else self.cols - 1 - col)

    def qubit_coord(self, index: int) -> tuple[int, int]:
        row, rem = divmod(index, self.cols)
        col = rem if row % 2 == 0 else self.cols - 1 - rem
        return row, col

    def z_plaquettes(self) -> tuple[Plaquette, ...]:
        return tuple(p for p in self.plaquettes if p.kind == "z")

    def x_plaquettes(self) -> tuple[Plaquette, ...]:
        return tuple(p for p in self.plaquettes if p.kind == "x")

    def grid_edges(self) -> frozenset[frozenset[int]]:
        """Nearest-neighbour qubit pairs of the underlying grid."""
        edges = set()
        for r in range(self.rows):
            for c in range(self.cols):
                if c + 1 < self.cols:
                    edges.add(frozenset((self.qubit_index(r, c), self.qubit_index(r, c + 1))))
                if r + 1 < self.rows:
                    edges.add(frozenset((self.qubit_index(r, c), self.qubit_index(r + 1, c))))
        return frozenset(edges)


def _assign_groups(plaquettes: list[tuple[str, tuple[int, ...]]]) -> list[Plaquette]:
    """Two-colour each plaquette type so no group reuses a qubit."""
    out: list[Plaquette] = []
    for kind, base in (("z", 0), ("x", 2)):
        members = [(qs, i) for i, (k, qs) in enumerate(plaquettes) if k == kind]
        members.sort(key=lambda item: min(item[0]))
        qubits_in_color: tuple[set[int], set[int]] = (set(), set())
        colors: dict[int, int] = {}
        for qs, original_i in members:
            for color in (0, 1):
                if not qubits_in_color[color].intersection(qs):
                    qubits_in_color[color].update(qs)
                    colors[original_i] = color
                    break
            else:
                raise ValueError("plaquette layout is not two-colorable per type")
        for qs, original_i in members:
            out.append(Plaquette(kind, qs, base + colors[original_i]))
    # Restore the construction order (interior raster first, then boundary).
    order = {qs: i for i, (k, qs) in enumerate(plaquettes)}
    out.sort(key=lambda p: order[p.qubits])
    return out


def build_lattice(rows: int, cols: int) -> Lattice:
    """Construct the lattice, its stabilizers and logical string operators."""
    if rows < 2 or cols < 2:
        raise ValueError("lattice needs rows >= 2 and cols >= 2")
    if rows % 2 == 0:
        raise ValueError(
            "rows must be odd: the vertical logical Z strings must have odd "
            "weight to anticommute with the global spin flip"
        )
    n = rows * cols

    def idx(r: int, c: int) -> int:
        return r * cols + (c if r % 2 == 0 else cols - 1 - c)

    raw: list[tuple[str, tuple[int, ...]]] = []
    # Interior squares: Z-type where (r + c) is odd.
    for r in range(rows - 1):
        for c in range(cols - 1):
            kind = "z" if (r + c) % 2 == 1 else "x"
            qs = tuple(sorted((idx(r, c), idx(r, c + 1), idx(r + 1, c), idx(r + 1, c + 1))))
            raw.append((kind, qs))
    # Boundary two-body checks.
    for c in range(cols - 1):
        if c % 2 == 0:  # top edge, Z-type
            raw.append(("z", tuple(sorted((idx(0, c), idx(0, c + 1))))))
        if (rows - 1 + c) % 2 == 1:  # bottom edge, Z-type
            raw.append(("z", tuple(sorted((idx(rows - 1, c), idx(rows - 1, c + 1))))))
    for r in range(rows - 1):
        if r % 2 == 1:  # left edge, X-type
            raw.append(("x", tuple(sorted((idx(r, 0), idx(r + 1, 0))))))
        if (r + cols - 1) % 2 == 0:  # right edge, X-type
            raw.append(("x", tuple(sorted((idx(r, cols - 1), idx(r + 1, cols - 1))))))

    plaquettes = tuple(_assign_groups(raw))

    logical_z = tuple(
        PauliString.z_string(n, [idx(r, c) for r in range(rows)]) for c in range(cols)
    )
    logical_x = tuple(
        PauliString.x_string(n, [idx(r, c) for c in range(cols)]) for r in range(rows)
    )
    lat = Lattice(rows, cols, plaquettes, logical_z, logical_x)
    _validate(lat)
    return lat


def _validate(lat: Lattice) -> None:
    n = lat.num_qubits
    paulis = [p.pauli(n) for p in lat.plaquettes]
    if len(paulis) != n - 1:
        raise AssertionError(
            f"expected {n - 1} stabilizers, constructed {len(paulis)}"
        )
    rows = np.array([symplectic_vector(p) for p in paulis])
    if gf2_rank(rows) != n - 1:
        raise AssertionError("stabilizers are not independent over GF(2)")
    for i, a in enumerate(paulis):
        for b in paulis[i + 1:]:
            if not a.commutes_with(b):
                raise AssertionError("plaquette operators do not all commute")
    covered = set()
    for p in lat.plaquettes:
        covered.update(p.qubits)
    if covered != set(range(n)):
        raise AssertionError("some qubit belongs to no plaquette")
    for zs in lat.logical_z:
        if zs.weight % 2 == 0:
            raise AssertionError("logical Z strings must have odd weight")
        for p in paulis:
            if not zs.commutes_with(p):
                raise AssertionError("logical Z fails to commute with a stabilizer")
    for xs in lat.logical_x:
        for p in paulis:
            if not xs.commutes_with(p):
                raise AssertionError("logical X fails to commute with a stabilizer")
        for zs in lat.logical_z:
            if xs.commutes_with(zs):
                raise AssertionError("logical X and Z strings must anticommute")


def logical_operators(lat: Lattice) -> tuple[tuple[PauliString, ...], tuple[PauliString, ...]]:
    """All equivalent logical string representatives, Z strings then X strings."""
    return lat.logical_z, lat.logical_x


@dataclass(frozen=True)
class DisorderRealization:
    """One draw of plaquette couplings, on-site fields and the initial bitstring.

    ``alpha`` is aligned with ``lattice.z_plaquettes()`` and ``beta`` with
    ``lattice.x_plaquettes()``; ``field[k]`` is the 3-vector on qubit k and
    ``initial_bits[k]`` the initial value of qubit k.
    """

    alpha: tuple[float, ...]
    beta: tuple[float, ...]
    field: tuple[tuple[float, float, float], ...]
    b_radius: float
    initial_bits: tuple[int, ...]
    seed: int

    def __post_init__(self) -> None:
        if self.b_radius < 0:
            raise ValueError("field radius must be non-negative")
        for v in self.field:
            if np.linalg.norm(v) > self.b_radius + 1e-12:
                raise ValueError("on-site field exceeds the ball radius")
        for a in self.alpha + self.beta:
            if not 0.0 <= a < 2.0 * np.pi:
                raise ValueError("plaquette angles must lie in [0, 2*pi)")
        if any(b not in (0, 1) for b in self.initial_bits):
            raise ValueError("initial bits must be 0 or 1")


def _sample_ball(rng: np.random.Generator, radius: float) -> tuple[float, float, float]:
    """Uniform point in the solid ball, by rejection from the enclosing cube."""
    if radius == 0.0:
        return (0.0, 0.0, 0.0)
    while True:
        v = rng.uniform(-radius, radius, size=3)
        if float(v @ v) <= radius * radius:
            return (float(v[0]), float(v[1]), float(v[2]))


def sample_disorder(lat: Lattice, b_radius: float, seed: int) -> DisorderRealization:
    """Draw one disorder realization; a pure function of (lattice, radius, seed)."""
    if b_radius < 0:
        raise ValueError("field radius must be non-negative")
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    alpha = tuple(float(x) for x in rng.uniform(0.0, 2.0 * np.pi, len(lat.z_plaquettes())))
    beta = tuple(float(x) for x in rng.uniform(0.0, 2.0 * np.pi, len(lat.x_plaquettes())))
    field = tuple(_sample_ball(rng, b_radius) for _ in range(lat.num_qubits))
    bits = tuple(int(b) for b in rng.integers(0, 2, lat.num_qubits))
    return DisorderRealization(alpha, beta, field, float(b_radius), bits, int(seed))
