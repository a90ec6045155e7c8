"""Experiment orchestration: bound verification sweeps and phase transitions.

Every trial is a pure function of (config, master seed, cell index, trial
index); component seeds are the first four 32-bit words of
SeedSequence(entropy=(master_seed, cell_index, trial_index)), so any single
trial can be re-run in isolation.  Records are collected in canonical
(cell, trial) order regardless of scheduling, which makes the emitted CSV
byte-identical across runs and thread counts.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from itertools import product
from math import comb

import numpy as np

from .bounds import verify_recovery_bound
from .errors import (
    ConfigurationError,
    DegenerateProblemError,
    InfeasibleProblemError,
    ResourceBudgetError,
)
from .frames import TightFrame, build_named_frame, build_parseval_random
from .lemmas import (
    sparse_convex_decomposition,
    subset_sum_identities,
    tail_power_bound_check,
)
from .measurement import build_problem, phase_distance
from .records import ExperimentConfig, TrialRecord
from .rip import RipReport, drip_constant, drip_order_for_t, sdrip_constants
from .signals import lq_quasinorm, sample_dictionary_sparse
from .solver import IrlsOptions, solve_irls, solve_oracle_noiseless


@dataclass(frozen=True)
class TransitionCell:
    cell_index: int
    n: int
    N: int
    m: int
    k: int
    q: float
    trials: int
    successes: int

    @property
    def rate(self) -> float:
        return self.successes / self.trials


TRANSITION_HEADER = "cell_index,n,N,m,k,q,trials,successes,rate"


def transition_to_csv(cells: list[TransitionCell]) -> str:
    lines = [TRANSITION_HEADER]
    for c in cells:
        lines.append(
            f"{c.cell_index},{c.n},{c.N},{c.m},{c.k},{format(c.q, '.17g')},"
            f"{c.trials},{c.successes},{format(c.rate, '.17g')}"
        )
    return "\n".join(lines) + "\n"


def derive_trial_seeds(master_seed: int, cell_index: int, trial_index: int) -> tuple[int, int, int, int]:
    """Four component seeds (frame, signal, matrix, solver/noise) per trial."""
    ss = np.random.SeedSequence(entropy=(master_seed, cell_index, trial_index))
    return tuple(int(s) for s in ss.generate_state(4))


def sample_measurement_matrix(ensemble: str, m: int, n: int, jitter: float, seed: int) -> np.ndarray:
    """Measurement ensembles; Gaussian entries are N(0, 1/m) so ||Ax|| ~ ||x||."""
    rng = np.random.default_rng(seed)
    if ensemble == "gaussian":
        return rng.standard_normal((m, n)) / np.sqrt(m)
    if m < n:
        raise ConfigurationError(f"{ensemble} ensemble needs m >= n, got m={m}, n={n}")
    G = rng.standard_normal((m, n))
    Q, R = np.linalg.qr(G)
    Q = Q * np.sign(np.diag(R))
    if ensemble == "orthonormal":
        return Q
    if ensemble == "near_isometric":
        return Q + jitter * rng.standard_normal((m, n)) / np.sqrt(m)
    raise ConfigurationError(f"unknown matrix ensemble {ensemble!r}")


def _build_frame(cfg: ExperimentConfig, n: int, N: int, seed: int) -> TightFrame:
    if cfg.frame_kind == "random":
        return build_parseval_random(n, N, seed)
    if cfg.frame_kind == "identity":
        if N != n:
            raise ConfigurationError("identity frame needs N == n")
        return build_named_frame("identity", n)
    if cfg.frame_kind == "duplicated_identity":
        if N != 2 * n:
            raise ConfigurationError("duplicated_identity frame needs N == 2n")
        return build_named_frame("duplicated_identity", n)
    if cfg.frame_kind == "mercedes":
        if (n, N) != (2, 3):
            raise ConfigurationError("mercedes frame is fixed at n=2, N=3")
        return build_named_frame("mercedes")
    raise ConfigurationError(f"unknown frame kind {cfg.frame_kind!r}")


def _bound_cells(cfg: ExperimentConfig) -> list[dict]:
    cells = []
    for idx, (n, N, m, k, q, t, eps) in enumerate(
        product(cfg.n_values, cfg.N_values, cfg.m_values, cfg.k_values,
                cfg.q_values, cfg.t_values, cfg.eps_values)
    ):
        cells.append(dict(cell_index=idx, n=n, N=N, m=m, k=k, q=q, t=t, eps=eps))
    return cells


def _skipped(cell: dict, trial: int, seed: int, reason: str) -> TrialRecord:
    return TrialRecord(cell_index=cell["cell_index"], trial_index=trial,
                       n=cell["n"], N=cell["N"], m=cell["m"], k=cell["k"],
                       q=cell["q"], t=cell["t"], eps=cell["eps"], seed=seed,
                       status="skipped", reason=reason)


def _run_bound_trial(cfg: ExperimentConfig, cell: dict, trial: int) -> TrialRecord:
    t0 = time.perf_counter()
    fseed, sseed, mseed, xseed = derive_trial_seeds(cfg.master_seed, cell["cell_index"], trial)
    n, N, m, k = cell["n"], cell["N"], cell["m"], cell["k"]
    q, t, eps = cell["q"], cell["t"], cell["eps"]
    if k < 1:
        return _skipped(cell, trial, fseed, "bound experiment needs k >= 1")
    order = drip_order_for_t(t, k)
    if order > N:
        return _skipped(cell, trial, fseed, f"order ceil(t*k)={order} exceeds N={N}")
    if comb(N, order) > cfg.support_budget:
        return _skipped(cell, trial, fseed, "support enumeration budget exceeded")
    if cfg.solver == "oracle" and eps > 0.0:
        return _skipped(cell, trial, fseed, "certified oracle handles eps=0 only; use irls")
    if cfg.solver == "oracle" and m > cfg.oracle_max_m:
        return _skipped(cell, trial, fseed, f"oracle guard m <= {cfg.oracle_max_m}")
    try:
        frame = _build_frame(cfg, n, N, fseed)
        truth = sample_dictionary_sparse(frame, k, sseed, cfg.magnitude_law)
        A = sample_measurement_matrix(cfg.matrix_ensemble, m, n, cfg.jitter, mseed)
        noise = ("bounded", eps) if eps > 0.0 else "none"
        problem = build_problem(A, frame, truth, q, noise=noise, seed=xseed)
        if cfg.compute_sdrip and m <= cfg.sdrip_max_m:
            rip = sdrip_constants(A, frame, order, half_rule=cfg.half_rule,
                                  support_budget=cfg.support_budget,
                                  max_m=cfg.sdrip_max_m)
        else:
            delta, _ = drip_constant(A, frame, order, support_budget=cfg.support_budget)
            rip = RipReport(order=order, delta=delta, exhaustive=True)
        if cfg.solver == "oracle":
            result = solve_oracle_noiseless(problem, max_m=cfg.oracle_max_m,
                                            support_budget=cfg.support_budget)
        else:
            opts = IrlsOptions(**{**cfg.solver_options, "seed": xseed})
            result = solve_irls(problem, opts)
        record = verify_recovery_bound(problem, result, rip, t)
    except (ResourceBudgetError, ConfigurationError,
            DegenerateProblemError, InfeasibleProblemError) as exc:
        return _skipped(cell, trial, fseed, f"{type(exc).__name__}: {exc}")
    eps_realized = float(np.linalg.norm(problem.b - np.abs(A @ truth.x)))
    return replace(record, cell_index=cell["cell_index"], trial_index=trial,
                   seed=fseed, eps_realized=eps_realized,
                   wall_time_s=time.perf_counter() - t0)


def _execute(tasks, worker, threads: int, max_seconds: float | None):
    """Run tasks preserving canonical order; stop launching on deadline."""
    start = time.perf_counter()
    results = {}
    if threads <= 1:
        for key, args in tasks:
            if max_seconds is not None and time.perf_counter() - start > max_seconds:
                break
            results[key] = worker(*args)
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = {}
            for key, args in tasks:
                if max_seconds is not None and time.perf_counter() - start > max_seconds:
                    break
                futures[key] = pool.submit(worker, *args)
            for key, fut in futures.items():
                results[key] = fut.result()
    return [results[key] for key in sorted(results)]


def run_bound_experiment(
    cfg: ExperimentConfig,
    threads: int = 1,
    max_seconds: float | None = None,
) -> list[TrialRecord]:
    """One record per (cell, trial); guarded cells are skipped with a reason."""
    cfg.validate()
    cells = _bound_cells(cfg)
    tasks = [((c["cell_index"], ti), (cfg, c, ti)) for c in cells for ti in range(cfg.trials)]
    return _execute(tasks, _run_bound_trial, threads, max_seconds)


def _run_transition_cell(cfg: ExperimentConfig, cell: dict) -> TransitionCell:
    n, N, m, k, q = cell["n"], cell["N"], cell["m"], cell["k"], cell["q"]
    successes = 0
    for trial in range(cfg.trials):
        fseed, sseed, mseed, xseed = derive_trial_seeds(cfg.master_seed, cell["cell_index"], trial)
        frame = _build_frame(cfg, n, N, fseed)
        truth = sample_dictionary_sparse(frame, k, sseed, cfg.magnitude_law)
        A = sample_measurement_matrix(cfg.matrix_ensemble, m, n, cfg.jitter, mseed)
        problem = build_problem(A, frame, truth, q, noise="none")
        try:
            if m <= cfg.oracle_max_m:
                result = solve_oracle_noiseless(problem, max_m=cfg.oracle_max_m,
                                                support_budget=cfg.support_budget)
            else:
                result = solve_irls(problem, IrlsOptions(**{**cfg.solver_options, "seed": xseed}))
        except (ResourceBudgetError, InfeasibleProblemError, DegenerateProblemError):
            continue
        dist = phase_distance(result.x_hat, truth.x, field="real")
        if dist <= cfg.success_tol * np.linalg.norm(truth.x) + 1e-15:
            successes += 1
    return TransitionCell(cell_index=cell["cell_index"], n=n, N=N, m=m, k=k, q=q,
                          trials=cfg.trials, successes=successes)


def run_phase_transition(
    cfg: ExperimentConfig,
    threads: int = 1,
    max_seconds: float | None = None,
) -> list[TransitionCell]:
    """Success fraction per (n, N, m, k, q) cell for noiseless recovery."""
    cfg.validate()
    cells = []
    for idx, (n, N, m, k, q) in enumerate(
        product(cfg.n_values, cfg.N_values, cfg.m_values, cfg.k_values, cfg.q_values)
    ):
        cells.append(dict(cell_index=idx, n=n, N=N, m=m, k=k, q=q))
    tasks = [((c["cell_index"],), (cfg, c)) for c in cells]
    return _execute(tasks, _run_transition_cell, threads, max_seconds)


def selfcheck_lemmas(seed: int = 0) -> tuple[bool, list[str]]:
    """Quick property sweep over the lemma utilities; returns (ok, report lines)."""
    rng = np.random.default_rng(seed)
    lines = []
    ok = True

    cases = 0
    exact = True
    for k in range(2, 7):
        for l in range(1, k + 1):
            for _ in range(10):
                v = rng.integers(-9, 10, size=k)
                ident = subset_sum_identities(k, l, v)
                cases += 1
                if ident.lhs1 != ident.rhs1 or ident.lhs2 != ident.rhs2:
                    exact = False
    ok &= exact
    lines.append(f"subset-sum identities: {'OK' if exact else 'FAIL'} ({cases} cases)")

    good = True
    n_dec = 0
    for _ in range(200):
        r = int(rng.integers(2, 10))
        k = int(rng.integers(1, r + 1))
        q = float(rng.uniform(0.2, 1.0))
        x = np.zeros(12)
        supp = rng.choice(12, size=r, replace=False)
        x[supp] = rng.standard_normal(r) * rng.uniform(0.5, 2.0)
        x[supp[np.abs(x[supp]) < 1e-6]] = 1.0
        alpha = max(np.max(np.abs(x)), (lq_quasinorm(x, q) / k) ** (1.0 / q)) * (1.0 + rng.uniform(0, 1))
        dec = sparse_convex_decomposition(x, k, alpha, q)
        n_dec += 1
        bound = min((r / k) * float(np.sum(x**2)),
                    alpha**q * float(np.sum(np.abs(x[supp]) ** (2.0 - q))))
        if (np.linalg.norm(dec.reconstruct() - x) > 1e-10 * max(1.0, np.linalg.norm(x))
                or abs(float(np.sum(dec.weights)) - 1.0) > 1e-12
                or np.any(np.count_nonzero(dec.atoms, axis=1) > k)
                or dec.weighted_energy() > bound + 1e-9):
            good = False
    ok &= good
    lines.append(f"sparse convex decomposition: {'OK' if good else 'FAIL'} ({n_dec} cases)")

    held = True
    for _ in range(2000):
        r = int(rng.integers(2, 12))
        k = int(rng.integers(1, r + 1))
        b = np.sort(rng.uniform(0, 3, size=r))[::-1]
        omega = float(rng.uniform(1.0, 4.0))
        gap = float(np.sum(b[k:]) - np.sum(b[:k]))
        d = max(0.0, gap) + float(rng.uniform(0, 1))
        res = tail_power_bound_check(b, k, d, omega)
        if not res.holds:
            held = False
    ok &= held
    lines.append(f"tail power bound: {'OK' if held else 'FAIL'} (2000 cases)")
    return bool(ok), lines
