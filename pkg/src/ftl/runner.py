"""Experiment orchestration: dynamics, eigenstate, sweep, lifetime, synthesis.

Work is split into independent (realization, trajectory) units with seeds
derived from the master seed by counter-based hashing, results are merged
in fixed index order, and every output file is byte-reproducible for a
given configuration regardless of the worker count.
"""
from __future__ import annotations

import concurrent.futures
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import (
    LN2,
    autocorrelator,
    fourier_spectrum,
    mean_and_stderr,
    topo_entropy,
    von_neumann_entropy,
)
from .builders import build_eigenstate_circuit, build_floquet_circuit
from .circuit import Circuit, apply_circuit, circuit_to_text, circuit_unitary
from .compiler import DEFAULT_PASSES, compile_circuit
from .config import ExperimentConfig, config_to_dict
from .lattice import Lattice, build_lattice, sample_disorder
from .noise import NoiseModel, TrajectoryRng, rate_derivation_report, run_noisy_trajectory
from .pauli import PauliString, evolution_matrix
from .statevector import StateVector, partial_trace, pauli_expectation
from .synth import BlockGraph, SynthOptions, neuroevolution_search, simplify
from .tables import line_chart_svg, write_csv, write_manifest, write_text

DENSE_EVOLUTION_MAX_QUBITS = 10


# ---------------------------------------------------------------------------
# shared helpers

def realization_seed(master_seed: int, index: int) -> int:
    """Stable per-realization seed derived from the master seed."""
    seq = np.random.SeedSequence(entropy=master_seed, spawn_key=(index,))
    return int(seq.generate_state(1, dtype=np.uint64)[0])


@dataclass(frozen=True)
class Observable:
    label: str
    pauli: PauliString
    z_type: bool
    weight: int


def build_observables(lat: Lattice, tokens: tuple[str, ...]) -> list[Observable]:
    out: list[Observable] = []
    if "zl" in tokens:
        for i, p in enumerate(lat.logical_z):
            out.append(Observable(f"ZL{i + 1}", p, True, p.weight))
    if "xl" in tokens:
        for i, p in enumerate(lat.logical_x):
            out.append(Observable(f"XL{i + 1}", p, False, p.weight))
    if "sz" in tokens:
        for k in range(lat.num_qubits):
            out.append(
                Observable(f"sz{k + 1}", PauliString.z_string(lat.num_qubits, [k]), True, 1)
            )
    return out


def initial_sign(bits: tuple[int, ...], pauli: PauliString) -> int:
    s = 1
    for q in pauli.support:
        s *= 1 - 2 * bits[q]
    return s


def _parallel_map(fn, items: list, workers: int) -> list:
    """Order-preserving map; results are identical for any worker count."""
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _base_manifest(subcommand: str, cfg: ExperimentConfig) -> dict:
    return {
        "subcommand": subcommand,
        "version": __version__,
        "config": config_to_dict(cfg),
        "deviations": [],
    }


def _plaquette_labels(lat: Lattice) -> dict[str, list[int]]:
    labels: dict[str, list[int]] = {}
    for i, p in enumerate(lat.z_plaquettes()):
        labels[f"Ap{i + 1}"] = [q + 1 for q in p.qubits]
    for i, p in enumerate(lat.x_plaquettes()):
        labels[f"Bq{i + 1}"] = [q + 1 for q in p.qubits]
    return labels


# ---------------------------------------------------------------------------
# stroboscopic evolution of one disorder realization

@dataclass(frozen=True)
class _DynamicsUnit:
    rows: int
    cols: int
    b_radius: float
    periods: int
    master_seed: int
    realization_index: int
    tokens: tuple[str, ...]
    noise: NoiseModel | None
    trajectories: int


def _evolve_signals(unit: _DynamicsUnit) -> np.ndarray:
    """Signals array of shape (num_observables, periods + 1)."""
    lat = build_lattice(unit.rows, unit.cols)
    seed = realization_seed(unit.master_seed, unit.realization_index)
    realization = sample_disorder(lat, unit.b_radius, seed)
    observables = build_observables(lat, unit.tokens)
    circuit = build_floquet_circuit(lat, realization)
    compiled = compile_circuit(circuit, DEFAULT_PASSES, lattice=lat)

    def record(state: StateVector, into: np.ndarray, n: int) -> None:
        for i, ob in enumerate(observables):
            into[i, n] = pauli_expectation(state, ob.pauli)

    periods = unit.periods
    if unit.noise is None:
        signals = np.empty((len(observables), periods + 1))
        state = StateVector.from_bits(realization.initial_bits)
        if lat.num_qubits <= DENSE_EVOLUTION_MAX_QUBITS:
            u = circuit_unitary(compiled.circuit)
            record(state, signals, 0)
            for n in range(1, periods + 1):
                state.amplitudes = u @ state.amplitudes
                record(state, signals, n)
        else:
            record(state, signals, 0)
            for n in range(1, periods + 1):
                apply_circuit(state, compiled.circuit)
                record(state, signals, n)
        return signals

    acc = np.zeros((len(observables), periods + 1))
    for t in range(unit.trajectories):
        rng = TrajectoryRng(
            unit.master_seed, unit.realization_index, t
        ).generator()
        state = StateVector.from_bits(realization.initial_bits)
        traj = np.empty((len(observables), periods + 1))
        record(state, traj, 0)
        for n in range(1, periods + 1):
            run_noisy_trajectory(compiled, unit.noise, rng, state)
            record(state, traj, n)
        acc += traj
    return acc / unit.trajectories


def _auto_signals(
    lat: Lattice,
    observables: list[Observable],
    bits: tuple[int, ...],
    signals: np.ndarray,
) -> dict[str, np.ndarray]:
    """Sign-corrected correlator per Z-type observable (label -> series)."""
    out: dict[str, np.ndarray] = {}
    for i, ob in enumerate(observables):
        if not ob.z_type:
            continue
        s0 = initial_sign(bits, ob.pauli)
        out[f"auto_{ob.label}"] = autocorrelator(s0, signals[i], ob.weight)
    return out


# ---------------------------------------------------------------------------
# subcommands

def run_dynamics(cfg: ExperimentConfig, out_dir: Path, workers: int = 1) -> dict[str, Path]:
    cfg.validate()
    lat = build_lattice(cfg.lattice.rows, cfg.lattice.cols)
    observables = build_observables(lat, cfg.observables.strings)
    model = cfg.noise.build_model() if cfg.noise.enabled else None
    units = [
        _DynamicsUnit(
            cfg.lattice.rows,
            cfg.lattice.cols,
            cfg.drive.b_radius,
            cfg.drive.periods,
            cfg.disorder.master_seed,
            r,
            cfg.observables.strings,
            model,
            cfg.noise.trajectories,
        )
        for r in range(cfg.disorder.realizations)
    ]
    all_signals = np.array(_parallel_map(_evolve_signals, units, workers))

    realization_rows = []
    auto_per_real: dict[str, list[np.ndarray]] = {}
    for r in range(cfg.disorder.realizations):
        bits = sample_disorder(
            lat, cfg.drive.b_radius, realization_seed(cfg.disorder.master_seed, r)
        ).initial_bits
        for i, ob in enumerate(observables):
            for n in range(cfg.drive.periods + 1):
                realization_rows.append((r, ob.label, n, float(all_signals[r, i, n])))
        for label, series in _auto_signals(lat, observables, bits, all_signals[r]).items():
            auto_per_real.setdefault(label, []).append(series)

    summary_rows = []
    summary_series: dict[str, np.ndarray] = {}
    for i, ob in enumerate(observables):
        mean, err = mean_and_stderr(all_signals[:, i, :])
        summary_series[ob.label] = mean
        for n in range(cfg.drive.periods + 1):
            summary_rows.append((ob.label, n, float(mean[n]), float(err[n])))
    for label in sorted(auto_per_real):
        mean, err = mean_and_stderr(np.array(auto_per_real[label]))
        summary_series[label] = mean
        for n in range(cfg.drive.periods + 1):
            summary_rows.append((label, n, float(mean[n]), float(err[n])))

    spectrum_rows = []
    if cfg.drive.periods >= 1:
        for label in sorted(summary_series):
            spec = fourier_spectrum(summary_series[label], label)
            for ratio, amp in zip(spec.omega_ratios, spec.amplitudes):
                spectrum_rows.append((label, float(ratio), float(amp)))

    manifest = _base_manifest("dynamics", cfg)
    manifest["realization_seeds"] = [
        realization_seed(cfg.disorder.master_seed, r)
        for r in range(cfg.disorder.realizations)
    ]
    if model is not None:
        manifest["derived_rates"] = rate_derivation_report(model)

    paths = {
        "realizations": write_csv(
            out_dir / "realizations.csv",
            ["realization", "operator", "n", "value"],
            realization_rows,
        ),
        "summary": write_csv(
            out_dir / "summary.csv", ["operator", "n", "mean", "stderr"], summary_rows
        ),
        "manifest": write_manifest(out_dir / "manifest.json", manifest),
    }
    if spectrum_rows:
        paths["spectrum"] = write_csv(
            out_dir / "spectrum.csv",
            ["operator", "omega_ratio", "amplitude"],
            spectrum_rows,
        )
    if "svg" in cfg.output.formats:
        series = {
            label: list(enumerate(summary_series[label]))
            for label in sorted(summary_series)
            if label.startswith("auto_ZL") or label.startswith("XL")
        }
        paths["plot"] = write_text(
            out_dir / "plots" / "dynamics.svg",
            line_chart_svg(series, "stroboscopic dynamics"),
        )
    return paths


# ---------------------------------------------------------------------------
# eigenstate + topological entanglement entropy

def tee_divisions(lat: Lattice) -> dict[str, tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]]:
    """Named region divisions (four- and six-qubit) for the entropy probe.

    Regions sit in the lower bulk rows and meet at a corner, which is what
    makes the boundary terms cancel; both choices are verified to yield
    exactly -ln 2 on the ideal eigenstate.
    """
    if lat.rows < 3 or lat.cols < 5:
        raise ValueError("named tee divisions need at least a 3 x 5 lattice")
    c0 = 2

    def q(r: int, c: int) -> int:
        return lat.qubit_index(r, c)

    four = (
        (q(1, c0),),
        (q(1, c0 + 1),),
        (q(2, c0), q(2, c0 + 1)),
    )
    six = (
        (q(1, c0), q(1, c0 + 1)),
        (q(1, c0 + 2), q(2, c0 + 2)),
        (q(2, c0), q(2, c0 + 1)),
    )
    return {"four": four, "six": six}


def _selected_divisions(cfg: ExperimentConfig, lat: Lattice) -> dict[str, tuple]:
    if cfg.tee.division == "custom":
        return {
            "custom": (
                tuple(q - 1 for q in cfg.tee.region_a),
                tuple(q - 1 for q in cfg.tee.region_b),
                tuple(q - 1 for q in cfg.tee.region_c),
            )
        }
    named = tee_divisions(lat)
    if cfg.tee.division == "both":
        return named
    return {cfg.tee.division: named[cfg.tee.division]}


@dataclass(frozen=True)
class _QuenchUnit:
    rows: int
    cols: int
    b_radius: float
    periods: int
    master_seed: int
    realization_index: int
    divisions: tuple[tuple[str, tuple], ...]
    noise: NoiseModel | None
    trajectories: int


def _eigenstate_operators(lat: Lattice) -> list[Observable]:
    obs: list[Observable] = []
    for i, p in enumerate(lat.z_plaquettes()):
        obs.append(Observable(f"Ap{i + 1}", p.pauli(lat.num_qubits), True, p.weight))
    for i, p in enumerate(lat.x_plaquettes()):
        obs.append(Observable(f"Bq{i + 1}", p.pauli(lat.num_qubits), False, p.weight))
    for i, p in enumerate(lat.logical_x):
        obs.append(Observable(f"XL{i + 1}", p, False, p.weight))
    for i, p in enumerate(lat.logical_z):
        obs.append(Observable(f"ZL{i + 1}", p, True, p.weight))
    return obs


def _quench_series(unit: _QuenchUnit) -> tuple[np.ndarray, np.ndarray]:
    """Per period: operator expectations and s_topo per division.

    Returns ``(ops, tee)`` with shapes (n_ops, periods+1) and
    (n_divisions, periods+1).
    """
    lat = build_lattice(unit.rows, unit.cols)
    seed = realization_seed(unit.master_seed, unit.realization_index)
    realization = sample_disorder(lat, unit.b_radius, seed)
    observables = _eigenstate_operators(lat)
    prep = build_eigenstate_circuit(lat)
    floquet = compile_circuit(
        build_floquet_circuit(lat, realization), DEFAULT_PASSES, lattice=lat
    )
    prep_compiled = compile_circuit(prep, DEFAULT_PASSES, lattice=lat)

    n_tee = len(unit.divisions)
    periods = unit.periods

    if unit.noise is None:
        ops = np.empty((len(observables), periods + 1))
        tee = np.empty((n_tee, periods + 1))
        state = StateVector.zero(lat.num_qubits)
        apply_circuit(state, prep_compiled.circuit)
        for n in range(periods + 1):
            if n > 0:
                apply_circuit(state, floquet.circuit)
            for i, ob in enumerate(observables):
                ops[i, n] = pauli_expectation(state, ob.pauli)
            for d, (_, regions) in enumerate(unit.divisions):
                tee[d, n] = topo_entropy(state, *regions).s_topo
        return ops, tee

    # Noisy path: average operator values over trajectories and compute the
    # entropies from the trajectory-averaged reduced density matrices, i.e.
    # from the reconstructed mixed state of each region.
    region_sets: list[tuple[int, ...]] = []
    for _, (a, b, c) in unit.divisions:
        a, b, c = tuple(a), tuple(b), tuple(c)
        for sub in (a, b, c, a + b, a + c, b + c, a + b + c):
            region_sets.append(tuple(sorted(sub)))
    region_sets = sorted(set(region_sets))
    rho_acc = {
        n: {reg: np.zeros((1 << len(reg), 1 << len(reg)), dtype=complex) for reg in region_sets}
        for n in range(periods + 1)
    }
    ops = np.zeros((len(observables), periods + 1))
    for t in range(unit.trajectories):
        rng = TrajectoryRng(unit.master_seed, unit.realization_index, t).generator()
        state = StateVector.zero(lat.num_qubits)
        run_noisy_trajectory(prep_compiled, unit.noise, rng, state)
        for n in range(periods + 1):
            if n > 0:
                run_noisy_trajectory(floquet, unit.noise, rng, state)
            for i, ob in enumerate(observables):
                ops[i, n] += pauli_expectation(state, ob.pauli)
            for reg in region_sets:
                rho_acc[n][reg] += partial_trace(state, reg)
    ops /= unit.trajectories
    tee = np.empty((n_tee, periods + 1))
    for n in range(periods + 1):
        entropies = {
            reg: von_neumann_entropy(rho_acc[n][reg] / unit.trajectories)
            for reg in region_sets
        }
        for d, (_, (a, b, c)) in enumerate(unit.divisions):
            a, b, c = tuple(a), tuple(b), tuple(c)

            def s(sub: tuple[int, ...]) -> float:
                return entropies[tuple(sorted(sub))]

            tee[d, n] = (
                s(a) + s(b) + s(c) - s(a + b) - s(a + c) - s(b + c) + s(a + b + c)
            )
    return ops, tee


def run_eigenstate(cfg: ExperimentConfig, out_dir: Path, workers: int = 1) -> dict[str, Path]:
    cfg.validate()
    lat = build_lattice(cfg.lattice.rows, cfg.lattice.cols)
    divisions = tuple(sorted(_selected_divisions(cfg, lat).items()))
    observables = _eigenstate_operators(lat)
    model = cfg.noise.build_model() if cfg.noise.enabled else None
    periods = cfg.tee.quench_periods
    realizations = cfg.disorder.realizations if periods > 0 else 1
    units = [
        _QuenchUnit(
            cfg.lattice.rows,
            cfg.lattice.cols,
            cfg.drive.b_radius,
            periods,
            cfg.disorder.master_seed,
            r,
            divisions,
            model,
            cfg.noise.trajectories,
        )
        for r in range(realizations)
    ]
    results = _parallel_map(_quench_series, units, workers)
    all_ops = np.array([ops for ops, _ in results])      # (R, n_ops, periods+1)
    all_tee = np.array([tee for _, tee in results])      # (R, n_div, periods+1)

    summary_rows = []
    for i, ob in enumerate(observables):
        mean, err = mean_and_stderr(all_ops[:, i, :])
        for n in range(periods + 1):
            summary_rows.append((ob.label, n, float(mean[n]), float(err[n])))
    for d, (name, _) in enumerate(divisions):
        mean, err = mean_and_stderr(all_tee[:, d, :])
        for n in range(periods + 1):
            summary_rows.append((f"s_topo[{name}]", n, float(mean[n]), float(err[n])))

    # t = 0 detailed region table (first realization)
    tee_rows = []
    state0_ops, _ = results[0]
    lat0 = lat
    if model is None:
        state = StateVector.zero(lat0.num_qubits)
        apply_circuit(state, build_eigenstate_circuit(lat0))
        for name, (a, b, c) in divisions:
            res = topo_entropy(state, a, b, c)
            for label, value in res.region_entropies().items():
                tee_rows.append((name, label, float(value)))
            tee_rows.append((name, "s_topo", float(res.s_topo)))
    else:
        for d, (name, _) in enumerate(divisions):
            tee_rows.append((name, "s_topo", float(all_tee[:, d, 0].mean())))

    manifest = _base_manifest("eigenstate", cfg)
    manifest["plaquettes"] = _plaquette_labels(lat)
    manifest["divisions"] = {
        name: {"A": [q + 1 for q in a], "B": [q + 1 for q in b], "C": [q + 1 for q in c]}
        for name, (a, b, c) in divisions
    }
    manifest["expected_s_topo"] = -LN2
    if model is not None:
        manifest["derived_rates"] = rate_derivation_report(model)

    paths = {
        "summary": write_csv(
            out_dir / "summary.csv", ["operator", "n", "mean", "stderr"], summary_rows
        ),
        "tee": write_csv(
            out_dir / "tee.csv", ["division", "region_label", "entropy_nats"], tee_rows
        ),
        "manifest": write_manifest(out_dir / "manifest.json", manifest),
    }
    if "svg" in cfg.output.formats and periods > 0:
        series = {}
        for d, (name, _) in enumerate(divisions):
            mean, _ = mean_and_stderr(all_tee[:, d, :])
            series[f"s_topo[{name}]"] = list(enumerate(mean))
        paths["plot"] = write_text(
            out_dir / "plots" / "tee_quench.svg",
            line_chart_svg(series, "entanglement-entropy quench"),
        )
    return paths


# ---------------------------------------------------------------------------
# transverse-field sweep

@dataclass(frozen=True)
class _SweepUnit:
    rows: int
    cols: int
    b_radius: float
    periods: int
    master_seed: int
    realization_index: int
    noise: NoiseModel | None
    trajectories: int


def _sweep_amplitude(unit: _SweepUnit) -> tuple[float, np.ndarray]:
    """Subharmonic amplitude of the string-averaged correlator, one draw."""
    dyn = _DynamicsUnit(
        unit.rows,
        unit.cols,
        unit.b_radius,
        unit.periods,
        unit.master_seed,
        unit.realization_index,
        ("zl",),
        unit.noise,
        unit.trajectories,
    )
    signals = _evolve_signals(dyn)
    lat = build_lattice(unit.rows, unit.cols)
    bits = sample_disorder(
        lat, unit.b_radius, realization_seed(unit.master_seed, unit.realization_index)
    ).initial_bits
    observables = build_observables(lat, ("zl",))
    autos = _auto_signals(lat, observables, bits, signals)
    avg = np.mean([autos[f"auto_{ob.label}"] for ob in observables], axis=0)
    spec = fourier_spectrum(avg, "auto_ZL_avg")
    return spec.subharmonic_amplitude(), avg


def run_sweep(cfg: ExperimentConfig, out_dir: Path, workers: int = 1) -> dict[str, Path]:
    cfg.validate()
    model = cfg.noise.build_model() if cfg.noise.enabled else None
    sweep_rows = []
    spectrum_rows = []
    chart: dict[str, list[tuple[float, float]]] = {}
    for b in cfg.sweep.b_values:
        units = [
            _SweepUnit(
                cfg.lattice.rows,
                cfg.lattice.cols,
                float(b),
                cfg.sweep.periods,
                cfg.disorder.master_seed,
                r,
                model,
                cfg.noise.trajectories,
            )
            for r in range(cfg.disorder.realizations)
        ]
        results = _parallel_map(_sweep_amplitude, units, workers)
        amplitudes = np.array([a for a, _ in results])
        signals = np.array([s for _, s in results])
        mean = float(amplitudes.mean())
        sd = float(amplitudes.std(ddof=1)) if len(amplitudes) > 1 else 0.0
        stderr = sd / np.sqrt(len(amplitudes)) if len(amplitudes) > 1 else 0.0
        sweep_rows.append((float(b), mean, sd, float(stderr)))
        avg_signal = signals.mean(axis=0)
        spec = fourier_spectrum(avg_signal, f"B={b:g}")
        for ratio, amp in zip(spec.omega_ratios, spec.amplitudes):
            spectrum_rows.append((f"B={b:g}", float(ratio), float(amp)))
        chart[f"B={b:g}"] = list(enumerate(avg_signal))

    manifest = _base_manifest("sweep", cfg)
    if model is not None:
        manifest["derived_rates"] = rate_derivation_report(model)
    paths = {
        "sweep": write_csv(
            out_dir / "sweep.csv",
            ["b", "subharmonic_amplitude", "amplitude_sd", "stderr"],
            sweep_rows,
        ),
        "spectrum": write_csv(
            out_dir / "spectrum.csv",
            ["operator", "omega_ratio", "amplitude"],
            spectrum_rows,
        ),
        "manifest": write_manifest(out_dir / "manifest.json", manifest),
    }
    if "svg" in cfg.output.formats:
        paths["plot"] = write_text(
            out_dir / "plots" / "sweep.svg",
            line_chart_svg(chart, "string correlator vs field radius"),
        )
    return paths


# ---------------------------------------------------------------------------
# lifetime scaling

@dataclass(frozen=True)
class _LifetimeUnit:
    rows: int
    cols: int
    b_radius: float
    horizon: int
    master_seed: int
    realization_index: int


def _lifetime_series(unit: _LifetimeUnit) -> np.ndarray:
    """Sign-aligned ``s0 <Z_L1(n)>`` for n = 0..horizon of one realization.

    Each random product state starts with a definite ``s0 = +/-1`` for the
    string; aligning by that sign before disorder averaging makes the
    averaged magnitude start at 1 (otherwise random initial signs cancel
    at n = 0 and no decay scale is measurable).
    """
    lat = build_lattice(unit.rows, unit.cols)
    seed = realization_seed(unit.master_seed, unit.realization_index)
    realization = sample_disorder(lat, unit.b_radius, seed)
    zl = lat.logical_z[0]
    s0 = initial_sign(realization.initial_bits, zl)
    circuit = build_floquet_circuit(lat, realization)
    compiled = compile_circuit(circuit, DEFAULT_PASSES, lattice=lat)
    state = StateVector.from_bits(realization.initial_bits)
    out = np.empty(unit.horizon + 1)
    out[0] = pauli_expectation(state, zl)
    if lat.num_qubits <= DENSE_EVOLUTION_MAX_QUBITS:
        u = circuit_unitary(compiled.circuit)
        for n in range(1, unit.horizon + 1):
            state.amplitudes = u @ state.amplitudes
            out[n] = pauli_expectation(state, zl)
    else:
        for n in range(1, unit.horizon + 1):
            apply_circuit(state, compiled.circuit)
            out[n] = pauli_expectation(state, zl)
    return s0 * out


def run_lifetime(cfg: ExperimentConfig, out_dir: Path, workers: int = 1) -> dict[str, Path]:
    cfg.validate()
    from .analysis import extract_lifetime, fit_exponential

    rows_out = []
    avg_rows = []
    sizes, taus, censoreds = [], [], []
    for n_qubits in cfg.lifetime.sizes:
        cols = n_qubits // 3
        units = [
            _LifetimeUnit(
                3,
                cols,
                cfg.drive.b_radius,
                cfg.lifetime.horizon,
                cfg.disorder.master_seed + n_qubits,  # independent draws per size
                r,
            )
            for r in range(cfg.lifetime.realizations)
        ]
        series = np.array(_parallel_map(_lifetime_series, units, workers))
        averaged = np.abs(series.mean(axis=0))
        tau, censored = extract_lifetime(averaged, cfg.lifetime.threshold)
        rows_out.append((n_qubits, tau, censored))
        sizes.append(n_qubits)
        taus.append(tau)
        censoreds.append(censored)
        step = max(1, len(averaged) // 2000)
        for n in range(0, len(averaged), step):
            avg_rows.append((n_qubits, n, float(averaged[n])))

    manifest = _base_manifest("lifetime", cfg)
    fit_info: dict[str, float] | None = None
    uncensored = [i for i, c in enumerate(censoreds) if not c]
    if len(uncensored) >= 2:
        fit = fit_exponential(np.array(sizes), np.array(taus), np.array(censoreds))
        fit_info = {"slope": fit.slope, "intercept": fit.intercept}
        manifest["fit"] = fit_info
    else:
        manifest["fit"] = None
        manifest["deviations"].append(
            "fewer than two uncensored lifetimes; exponential fit skipped"
        )

    paths = {
        "lifetime": write_csv(
            out_dir / "lifetime.csv", ["N", "tau_star", "censored"], rows_out
        ),
        "signals": write_csv(
            out_dir / "lifetime_signals.csv", ["N", "n", "abs_mean_zl"], avg_rows
        ),
        "manifest": write_manifest(out_dir / "manifest.json", manifest),
    }
    return paths


# ---------------------------------------------------------------------------
# circuit synthesis

def run_synth(cfg: ExperimentConfig, out_dir: Path, workers: int = 1) -> dict[str, Path]:
    cfg.validate()
    n = 2 if cfg.synth.target == "zz" else 4
    target_pauli = PauliString.z_string(n, range(n))
    target = evolution_matrix(target_pauli, cfg.synth.angle)
    graph = BlockGraph.line(n)
    options = SynthOptions(
        population=cfg.synth.population,
        initial_depth=cfg.synth.initial_depth,
        depth_step=cfg.synth.depth_step,
        generations=cfg.synth.generations,
        max_iters=cfg.synth.max_iters,
        seed=cfg.synth.seed,
        loss_form=cfg.synth.loss_form,
    )
    result = neuroevolution_search(target, graph, options)
    circuit, params = simplify(result.circuit, result.params)

    name = cfg.synth.name
    manifest = _base_manifest("synth", cfg)
    manifest["loss"] = result.loss
    manifest["loss_form"] = result.loss_form
    manifest["history"] = result.history
    manifest["gate_counts"] = circuit.gate_counts()
    param_lines = "".join(
        f"theta{i}={v:.17g}\n" for i, v in enumerate(params)
    )
    paths = {
        "circuit": write_text(out_dir / f"{name}.circuit", circuit_to_text(circuit)),
        "params": write_text(out_dir / f"{name}.params", param_lines),
        "manifest": write_manifest(out_dir / "manifest.json", manifest),
    }
    return paths


# ---------------------------------------------------------------------------
# spectrum re-analysis of an existing summary table

def run_spectrum(summary_path: Path, out_dir: Path) -> dict[str, Path]:
    import csv as _csv

    series: dict[str, dict[int, float]] = {}
    with open(summary_path, encoding="utf-8") as fh:
        reader = _csv.DictReader(fh)
        for row in reader:
            series.setdefault(row["operator"], {})[int(row["n"])] = float(row["mean"])
    rows = []
    for label in sorted(series):
        values = np.array([series[label][n] for n in sorted(series[label])])
        if len(values) < 2:
            continue
        spec = fourier_spectrum(values, label)
        for ratio, amp in zip(spec.omega_ratios, spec.amplitudes):
            rows.append((label, float(ratio), float(amp)))
    return {
        "spectrum": write_csv(
            out_dir / "spectrum.csv", ["operator", "omega_ratio", "amplitude"], rows
        )
    }
