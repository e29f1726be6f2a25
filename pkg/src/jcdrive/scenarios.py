"""Scenario runner: figure sweeps, qubit-drive phase traces, readout contrast.

Each scenario drives the full lab-frame dynamics (no dispersive approximation)
and compares against the closed-form dressed-coherent-state predictions.  The
sweeps are embarrassingly parallel over points; every input a worker touches
is immutable, so points may be dispatched to a process pool and are collected
back in sweep order.  Runs are deterministic: identical configs produce
identical physics columns (wall-time bookkeeping aside).
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial
from typing import Optional, Sequence

import numpy as np

from . import metrics
from .config import ConfigError, ScenarioConfig
from .dressed import dressed_basis, dressed_coherent_state, dressed_state
from .dynamics import (
    TimeGrid,
    convergence_check,
    integrate,
    lab_drive_hamiltonian,
    qubit_drive_lab_hamiltonian,
)
from .hilbert import FockCutoff, SystemParams, basis_state, required_cutoff
from .propagators import DriveParams, QubitDriveParams, alpha_ge, phase_corrected_amplitudes

__all__ = ["ScenarioResult", "run_scenario", "emit_csv", "convergence_probe", "dt_bound"]

ALPHA_SQ_GRID = (1.0, 2.0, 4.0, 6.0, 9.0)
LAMBDA_GRID = (0.05, 0.075, 0.1, 0.15, 0.2)
EPSILON_GRID = (0.02, 0.04, 0.06, 0.08, 0.10)


@dataclass(frozen=True)
class ScenarioResult:
    """Labeled rows of scalar outputs for CSV emission."""

    scenario: str
    columns: tuple[str, ...]
    rows: tuple[tuple, ...]
    meta: dict


def emit_csv(result: ScenarioResult, path) -> None:
    """Write UTF-8 CSV: one '# scenario=...' metadata comment, header, data rows.

    Floats carry 12 significant digits so a round-trip read reproduces them.
    """
    lines = []
    meta = ", ".join(f"{k}={v}" for k, v in result.meta.items())
    lines.append(f"# scenario={result.scenario}, params={meta}")
    lines.append(",".join(result.columns))
    for row in result.rows:
        lines.append(",".join(_format_cell(v) for v in row))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def _format_cell(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return f"{float(v):.11e}"


def run_scenario(config: ScenarioConfig) -> ScenarioResult:
    """Run one scenario to completion and return its result table.

    Rows that fail the self-convergence check are flagged (converged=false)
    but the run continues.
    """
    try:
        runner = _RUNNERS[config.scenario]
    except KeyError:
        raise ConfigError(
            f"unknown scenario {config.scenario!r}; valid: {', '.join(_RUNNERS)}"
        ) from None
    return runner(config)


# ---------------------------------------------------------------------------
# shared machinery

def dt_bound(params: SystemParams, cutoff: FockCutoff, eps_abs: float,
            eta_abs: float = 0.0, cosine: bool = False) -> float:
    """Largest step satisfying dt * max|eig(H)| < 0.1, from a spectral-radius bound."""
    n = cutoff.n_max
    rho = (
        params.omega_c * (n - 1)
        + 0.5 * abs(params.omega_q)
        + abs(params.chi) * n
        + params.g * math.sqrt(n)
        + (4.0 if cosine else 2.0) * eps_abs * math.sqrt(n)
        + eta_abs
    )
    return 0.099 / rho


def _cutoff_for(alpha_abs: float, override: Optional[int]) -> FockCutoff:
    needed = required_cutoff(alpha_abs) + 2  # headroom for the excited-branch partner level
    if override is not None:
        if override < needed:
            raise ValueError(
                f"configured n_max={override} below the truncation rule ({needed})"
            )
        return FockCutoff(override)
    return FockCutoff(needed)


def _branch_targets(drive: DriveParams, params: SystemParams, phase_correction: bool):
    if phase_correction:
        return phase_corrected_amplitudes(drive, params)
    ag, ae = alpha_ge(drive, params)
    return (
        ag * np.exp(-1j * (params.omega_c - params.chi) * drive.T),
        ae * np.exp(-1j * (params.omega_c + params.chi) * drive.T),
    )


def _fidelity_point(config: ScenarioConfig, lam: float, eps_abs: float, alpha_sq: float) -> dict:
    """Drive both qubit branches to the target photon number and score the overlaps.

    Ground branch: start |g,0>, drive at omega_c - chi.  Excited branch: start
    from the dressed (or bare, per config) excited state, drive at
    omega_c + chi.  At these branch resonances |alpha(T)| = |eps| T, so the
    pulse length for a target amplitude is simply T = |alpha| / |eps|.
    """
    t_start = time.perf_counter()
    params = config.system_params(lam_override=lam if lam != config.lam else None)
    alpha_abs = math.sqrt(alpha_sq)
    T = alpha_abs / eps_abs
    epsilon = eps_abs * np.exp(1j * np.angle(complex(config.epsilon))) if config.epsilon else eps_abs
    cutoff = _cutoff_for(alpha_abs, config.n_max)
    basis = dressed_basis(params, cutoff, config.basis)
    prep_basis = dressed_basis(params, cutoff, "exact")
    dt_cap = config.dt or dt_bound(params, cutoff, eps_abs, cosine=config.drive_form == "cosine")
    grid = TimeGrid.for_duration(T, dt_cap)

    out: dict = {"alpha_sq": alpha_sq, "lambda": lam, "eps_abs": eps_abs, "converged": True}
    for branch in ("g", "e"):
        omega_d = params.omega_c - params.chi if branch == "g" else params.omega_c + params.chi
        drive = DriveParams(epsilon, omega_d, T)
        if branch == "g":
            psi0 = basis_state(cutoff, "g", 0)
        elif (config.initial or "dressed") == "dressed":
            psi0 = dressed_state("e", 0, prep_basis)
        else:
            psi0 = basis_state(cutoff, "e", 0)
        ham = lab_drive_hamiltonian(params, drive, cutoff, config.drive_form)
        psi = integrate(ham, psi0, grid, store_every=grid.steps).final
        ag_t, ae_t = _branch_targets(drive, params, config.phase_correction)
        target = ag_t if branch == "g" else ae_t
        f_d, f_b, gap = metrics.dressed_vs_bare_gap(psi, target, branch, basis)
        out[f"F_D_{branch}"] = f_d
        out[f"F_{branch}"] = f_b
        out[f"gap_{branch}"] = gap
        out[f"P_e_{branch}"] = metrics.excited_probability(psi)
        out[f"n_{branch}"] = metrics.photon_number(psi)
        out[f"entropy_{branch}"] = metrics.entanglement_entropy(psi)
        if config.check_convergence:
            out["converged"] &= convergence_check(ham, psi0, grid).passed
    out["wall_time_s"] = time.perf_counter() - t_start
    return out


def _map_points(fn, items: Sequence, workers: int) -> list:
    if workers <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _meta(config: ScenarioConfig, params: SystemParams, **extra) -> dict:
    meta = {
        "g": f"{params.g:g}",
        "lambda": f"{params.lam:g}",
        "omega_c": f"{params.omega_c:g}",
        "omega_q": f"{params.omega_q:g}",
        "chi": f"{params.chi:g}",
        "epsilon": f"{complex(config.epsilon):g}",
        "drive_form": config.drive_form,
        "phase_correction": "on" if config.phase_correction else "off",
        "basis": config.basis,
    }
    meta.update({k: str(v) for k, v in extra.items()})
    return meta


# ---------------------------------------------------------------------------
# figure-style sweeps

def _run_fig2a(config: ScenarioConfig) -> ScenarioResult:
    grid = config.sweep_grid(ALPHA_SQ_GRID)
    eps_abs = abs(complex(config.epsilon))
    fn = partial(_fidelity_point, config, config.lam, eps_abs)
    points = _map_points(fn, grid, config.workers)
    columns = (
        "alpha_sq", "one_minus_F_D_g", "one_minus_F_D_e", "F_D_g", "F_D_e",
        "gap_g", "gap_e", "P_e_g", "P_e_e", "n_g", "n_e", "entropy_g",
        "entropy_e", "converged", "wall_time_s",
    )
    rows = tuple(
        (
            p["alpha_sq"], 1.0 - p["F_D_g"], 1.0 - p["F_D_e"], p["F_D_g"], p["F_D_e"],
            p["gap_g"], p["gap_e"], p["P_e_g"], p["P_e_e"], p["n_g"], p["n_e"],
            p["entropy_g"], p["entropy_e"], p["converged"], p["wall_time_s"],
        )
        for p in points
    )
    return ScenarioResult("fig2a", columns, rows, _meta(config, config.system_params()))


def _run_fig2b(config: ScenarioConfig) -> ScenarioResult:
    grid = config.sweep_grid(ALPHA_SQ_GRID)
    eps_abs = abs(complex(config.epsilon))
    fn = partial(_fidelity_point, config, config.lam, eps_abs)
    points = _map_points(fn, grid, config.workers)
    columns = (
        "alpha_sq", "F_D_g", "F_g", "gap_g", "F_D_e", "F_e", "gap_e",
        "converged", "wall_time_s",
    )
    rows = tuple(
        (
            p["alpha_sq"], p["F_D_g"], p["F_g"], p["gap_g"],
            p["F_D_e"], p["F_e"], p["gap_e"], p["converged"], p["wall_time_s"],
        )
        for p in points
    )
    return ScenarioResult("fig2b", columns, rows, _meta(config, config.system_params()))


def _run_fig2c(config: ScenarioConfig) -> ScenarioResult:
    grid = config.sweep_grid(LAMBDA_GRID)
    eps_abs = abs(complex(config.epsilon))
    fn = partial(_lambda_point, config, eps_abs, config.alpha_sq)
    points = _map_points(fn, grid, config.workers)
    columns = (
        "lambda", "one_minus_F_D_g", "one_minus_F_D_e", "F_D_g", "F_D_e",
        "converged", "wall_time_s",
    )
    rows = tuple(
        (
            p["lambda"], 1.0 - p["F_D_g"], 1.0 - p["F_D_e"], p["F_D_g"], p["F_D_e"],
            p["converged"], p["wall_time_s"],
        )
        for p in points
    )
    return ScenarioResult(
        "fig2c", columns, rows,
        _meta(config, config.system_params(), alpha_sq=f"{config.alpha_sq:g}"),
    )


def _lambda_point(config: ScenarioConfig, eps_abs: float, alpha_sq: float, lam: float) -> dict:
    return _fidelity_point(config, lam, eps_abs, alpha_sq)


def _run_fig2d(config: ScenarioConfig) -> ScenarioResult:
    grid = config.sweep_grid(EPSILON_GRID)
    fn = partial(_epsilon_point, config, config.alpha_sq)
    points = _map_points(fn, grid, config.workers)
    columns = (
        "epsilon_abs", "one_minus_F_D_g", "one_minus_F_D_e", "F_D_g", "F_D_e",
        "converged", "wall_time_s",
    )
    rows = tuple(
        (
            p["eps_abs"], 1.0 - p["F_D_g"], 1.0 - p["F_D_e"], p["F_D_g"], p["F_D_e"],
            p["converged"], p["wall_time_s"],
        )
        for p in points
    )
    return ScenarioResult(
        "fig2d", columns, rows,
        _meta(config, config.system_params(), alpha_sq=f"{config.alpha_sq:g}"),
    )


def _epsilon_point(config: ScenarioConfig, alpha_sq: float, eps_abs: float) -> dict:
    return _fidelity_point(config, config.lam, eps_abs, alpha_sq)


def _run_custom(config: ScenarioConfig) -> ScenarioResult:
    result = _run_fig2a(config)
    return ScenarioResult("custom", result.columns, result.rows, result.meta)


# ---------------------------------------------------------------------------
# qubit-drive phase dependence

def _run_fig4(config: ScenarioConfig) -> ScenarioResult:
    """Excited-state probability vs time for beta purely real vs purely imaginary.

    The initial cavity+qubit state is the dressed coherent state itself (the
    exact-basis construction), which pins the phase of beta exactly; the
    qubit drive then runs for one full period of its strength.
    """
    t_start = time.perf_counter()
    params = config.system_params()
    beta_abs = math.sqrt(config.alpha_sq)
    eta_abs = config.eta_abs if config.eta_abs is not None else 0.05 * params.omega_q
    eta = eta_abs * np.exp(1j * config.eta_phase)
    omega = (
        config.omega_drive
        if config.omega_drive is not None
        else params.omega_q + params.chi * (2.0 * config.alpha_sq + 2.0)
    )
    tau_max = 2.0 * math.pi / eta_abs
    cutoff = _cutoff_for(beta_abs, config.n_max)
    basis = dressed_basis(params, cutoff, "exact")
    qd = QubitDriveParams(eta, omega, tau_max)
    ham = qubit_drive_lab_hamiltonian(params, qd, cutoff)
    dt_cap = config.dt or dt_bound(params, cutoff, 0.0, eta_abs=eta_abs)
    grid = TimeGrid.for_duration(tau_max, dt_cap)
    store_every = max(1, grid.steps // max(2, config.time_points))

    curves = {}
    for label, beta in (("real", beta_abs + 0j), ("imag", 1j * beta_abs)):
        psi0 = dressed_coherent_state("g", beta, basis)
        traj = integrate(ham, psi0, grid, store_every=store_every)
        curves[label] = (traj.times, np.array([metrics.excited_probability(s) for s in traj.states]))

    converged = True
    if config.check_convergence:
        psi0 = dressed_coherent_state("g", beta_abs + 0j, basis)
        converged = convergence_check(ham, psi0, grid).passed

    times = curves["real"][0]
    pe_r, pe_i = curves["real"][1], curves["imag"][1]
    columns = ("t", "P_e_beta_real", "P_e_beta_imag", "abs_diff", "converged")
    rows = tuple(
        (t, pr, pi, abs(pr - pi), converged) for t, pr, pi in zip(times, pe_r, pe_i)
    )
    meta = _meta(
        config, params,
        beta_sq=f"{config.alpha_sq:g}", eta_abs=f"{eta_abs:g}", omega_drive=f"{omega:g}",
        max_abs_diff=f"{float(np.max(np.abs(pe_r - pe_i))):.6f}",
        wall_time_s=f"{time.perf_counter() - t_start:.3f}",
    )
    return ScenarioResult("fig4", columns, rows, meta)


# ---------------------------------------------------------------------------
# dispersive readout contrast

def _run_readout(config: ScenarioConfig) -> ScenarioResult:
    """Conditional cavity occupation at the readout operating point.

    Drive at omega_c - chi for T = pi/chi: the excited-branch displacement
    winds through a full circle and returns to zero analytically, while the
    ground branch fills linearly.  The residual photon number when starting
    from the bare excited state is the spurious population that limits the
    measurement contrast; it is compared against the closed-form prediction
    sin^2(lam) (cos^2(lam) + 1 + |alpha_g|^2) evaluated with the simulated
    ground-branch photon number.
    """
    t_start = time.perf_counter()
    params = config.system_params()
    eps = complex(config.epsilon)
    T = math.pi / params.chi
    drive = DriveParams(eps, params.omega_c - params.chi, T)
    ag, ae = alpha_ge(drive, params)
    cutoff = _cutoff_for(abs(ag), config.n_max)
    dt_cap = config.dt or dt_bound(params, cutoff, abs(eps), cosine=config.drive_form == "cosine")
    grid = TimeGrid.for_duration(T, dt_cap)
    ham = lab_drive_hamiltonian(params, drive, cutoff, config.drive_form)

    psi0_g = basis_state(cutoff, "g", 0)
    n_g = metrics.photon_number(integrate(ham, psi0_g, grid, store_every=grid.steps).final)

    # spurious population exists for the *bare* excited start; the dressed
    # eigenstate start leaves only the ~lam^2 dressing background
    initial = config.initial or "bare"
    if initial == "bare":
        psi0_e = basis_state(cutoff, "e", 0)
    else:
        psi0_e = dressed_state("e", 0, dressed_basis(params, cutoff, "exact"))
    n_e = metrics.photon_number(integrate(ham, psi0_e, grid, store_every=grid.steps).final)

    lam = params.lam
    predicted = math.sin(lam) ** 2 * (math.cos(lam) ** 2 + 1.0 + n_g)
    rel_error = abs(n_e - predicted) / predicted if predicted > 0 else float("nan")

    converged = True
    if config.check_convergence:
        converged = (
            convergence_check(ham, psi0_g, grid).passed
            and convergence_check(ham, psi0_e, grid).passed
        )

    columns = (
        "alpha_g_abs_analytic", "alpha_e_abs_analytic", "n_g_sim", "n_e_sim",
        "predicted_spurious_n", "rel_error", "converged", "wall_time_s",
    )
    rows = ((abs(ag), abs(ae), n_g, n_e, predicted, rel_error, converged,
             time.perf_counter() - t_start),)
    meta = _meta(
        config, params, T=f"{T:g}", omega_d=f"{params.omega_c - params.chi:g}",
        initial=initial,
    )
    return ScenarioResult("readout", columns, rows, meta)


def convergence_probe(config: ScenarioConfig):
    """Convergence report for the first point of the configured scenario (sim check)."""
    params = config.system_params()
    if config.scenario == "fig4":
        beta_abs = math.sqrt(config.alpha_sq)
        eta_abs = config.eta_abs if config.eta_abs is not None else 0.05 * params.omega_q
        omega = (
            config.omega_drive
            if config.omega_drive is not None
            else params.omega_q + params.chi * (2.0 * config.alpha_sq + 2.0)
        )
        tau_max = 2.0 * math.pi / eta_abs
        cutoff = _cutoff_for(beta_abs, config.n_max)
        qd = QubitDriveParams(eta_abs * np.exp(1j * config.eta_phase), omega, tau_max)
        ham = qubit_drive_lab_hamiltonian(params, qd, cutoff)
        psi0 = dressed_coherent_state("g", beta_abs + 0j, dressed_basis(params, cutoff, "exact"))
        dt_cap = config.dt or dt_bound(params, cutoff, 0.0, eta_abs=eta_abs)
        grid = TimeGrid.for_duration(tau_max, dt_cap)
        return convergence_check(ham, psi0, grid)

    eps_abs = abs(complex(config.epsilon))
    if config.scenario == "readout":
        T = math.pi / params.chi
        alpha_abs = eps_abs * T
        omega_d = params.omega_c - params.chi
    else:
        first = config.sweep_grid(
            ALPHA_SQ_GRID if config.scenario in ("fig2a", "fig2b", "custom") else
            LAMBDA_GRID if config.scenario == "fig2c" else EPSILON_GRID
        )[0]
        if config.scenario == "fig2c":
            params = config.system_params(lam_override=first)
            alpha_abs = math.sqrt(config.alpha_sq)
        elif config.scenario == "fig2d":
            eps_abs = first
            alpha_abs = math.sqrt(config.alpha_sq)
        else:
            alpha_abs = math.sqrt(first)
        T = alpha_abs / eps_abs
        omega_d = params.omega_c - params.chi
    eps = eps_abs * np.exp(1j * np.angle(complex(config.epsilon))) if config.epsilon else eps_abs
    drive = DriveParams(eps, omega_d, T)
    cutoff = _cutoff_for(alpha_abs, config.n_max)
    ham = lab_drive_hamiltonian(params, drive, cutoff, config.drive_form)
    psi0 = basis_state(cutoff, "g", 0)
    dt_cap = config.dt or dt_bound(params, cutoff, eps_abs, cosine=config.drive_form == "cosine")
    grid = TimeGrid.for_duration(T, dt_cap)
    return convergence_check(ham, psi0, grid)


_RUNNERS = {
    "fig2a": _run_fig2a,
    "fig2b": _run_fig2b,
    "fig2c": _run_fig2c,
    "fig2d": _run_fig2d,
    "fig4": _run_fig4,
    "readout": _run_readout,
    "custom": _run_custom,
}
