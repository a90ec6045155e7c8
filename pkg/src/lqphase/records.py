"""Experiment configuration and trial records, with CSV/JSON emission.

The CSV schema is fixed (see CSV_COLUMNS) and excludes wall time, so output
is byte-identical for identical (config, seed) regardless of machine or
thread count.  Floats are serialized with 17 significant digits.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, fields

from .errors import ConfigurationError, ParameterError

CSV_COLUMNS = (
    "cell_index", "trial_index", "n", "N", "m", "k", "q", "t", "eps", "seed",
    "status", "reason", "delta", "delta_order", "theta_minus", "theta_plus",
    "delta_theta_bound", "theta_window_ok", "admissible", "marginal", "sigma_k",
    "eps_realized", "method", "objective", "feasibility", "solver_iterations",
    "lhs", "rhs", "bound_status",
)

CSV_HEADER = ",".join(CSV_COLUMNS)


@dataclass(frozen=True)
class TrialRecord:
    """One recovery experiment; reproducible from (config, master seed, indices)."""

    cell_index: int = -1
    trial_index: int = -1
    n: int = 0
    N: int = 0
    m: int = 0
    k: int = 0
    q: float = 1.0
    t: float = 1.0
    eps: float = 0.0
    seed: int = 0
    status: str = "ok"  # ok | skipped
    reason: str = ""
    delta: float | None = None
    delta_order: int | None = None
    theta_minus: float | None = None
    theta_plus: float | None = None
    delta_theta_bound: float | None = None
    theta_window_ok: bool | None = None
    admissible: bool | None = None
    marginal: bool | None = None
    sigma_k: float | None = None
    eps_realized: float | None = None
    method: str = ""
    objective: float | None = None
    feasibility: float | None = None
    solver_iterations: int | None = None
    lhs: float | None = None
    rhs: float | None = None
    bound_status: str = ""  # pass | fail | not_applicable | ""
    wall_time_s: float | None = None


def _fmt_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return format(v, ".17g")
    if isinstance(v, int):
        return str(v)
    return str(v).replace(",", ";")


def records_to_csv(records: list[TrialRecord]) -> str:
    lines = [CSV_HEADER]
    for r in records:
        d = asdict(r)
        lines.append(",".join(_fmt_cell(d[c]) for c in CSV_COLUMNS))
    return "\n".join(lines) + "\n"


def emit_results(records: list[TrialRecord], format: str, path: str) -> str:
    """Write records as CSV (stable column order) or a JSON array; returns path."""
    if not records:
        raise ParameterError("no records to emit")
    if format == "csv":
        payload = records_to_csv(records)
    elif format == "json":
        payload = json.dumps([asdict(r) for r in records], indent=1)
    else:
        raise ParameterError(f"format must be 'csv' or 'json', got {format!r}")
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(payload)
    except OSError as exc:
        raise OSError(f"cannot write results to {path}: {exc}") from exc
    return path


def records_from_json(path: str) -> list[TrialRecord]:
    with open(path, "r", encoding="utf-8") as fh:
        raw = json.load(fh)
    names = {f.name for f in fields(TrialRecord)}
    return [TrialRecord(**{k: v for k, v in item.items() if k in names}) for item in raw]


@dataclass
class ExperimentConfig:
    """Grid definition for bound-verification and phase-transition sweeps."""

    n_values: list[int]
    N_values: list[int]
    m_values: list[int]
    k_values: list[int]
    q_values: list[float]
    t_values: list[float] = field(default_factory=lambda: [1.0])
    eps_values: list[float] = field(default_factory=lambda: [0.0])
    trials: int = 1
    master_seed: int = 0
    solver: str = "oracle"
    solver_options: dict = field(default_factory=dict)
    frame_kind: str = "random"  # random | identity | duplicated_identity | mercedes
    matrix_ensemble: str = "gaussian"  # gaussian | orthonormal | near_isometric
    jitter: float = 0.05
    magnitude_law: str = "gaussian"
    compute_sdrip: bool = False
    half_rule: str = "ceil"
    support_budget: int = 10**6
    oracle_max_m: int = 10
    sdrip_max_m: int = 14
    success_tol: float = 1e-6
    version: int = 1

    def validate(self) -> None:
        if self.version != 1:
            raise ConfigurationError(f"unsupported config version {self.version}")
        for name in ("n_values", "N_values", "m_values", "k_values",
                     "q_values", "t_values", "eps_values"):
            vals = getattr(self, name)
            if not vals:
                raise ConfigurationError(f"{name} must be nonempty")
        if self.trials < 1:
            raise ConfigurationError("trials must be >= 1")
        if any(not (0.0 < q <= 1.0) for q in self.q_values):
            raise ConfigurationError("every q must lie in (0, 1]")
        if any(not (0.0 < t < 4.0 / 3.0) for t in self.t_values):
            raise ConfigurationError("every t must lie in (0, 4/3)")
        if any(e < 0.0 for e in self.eps_values):
            raise ConfigurationError("noise levels must be nonnegative")
        if self.solver not in ("oracle", "irls"):
            raise ConfigurationError(f"unknown solver {self.solver!r}")
        if self.matrix_ensemble not in ("gaussian", "orthonormal", "near_isometric"):
            raise ConfigurationError(f"unknown matrix ensemble {self.matrix_ensemble!r}")
        if any(n > N for n in self.n_values for N in self.N_values):
            raise ConfigurationError("every n must be <= every N in the grid")

    def to_json_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json_dict(cls, data: dict) -> "ExperimentConfig":
        names = {f.name for f in fields(cls)}
        unknown = set(data) - names
        if unknown:
            raise ConfigurationError(f"unknown config keys: {sorted(unknown)}")
        cfg = cls(**data)
        cfg.validate()
        return cfg

    @classmethod
    def from_json_file(cls, path: str) -> "ExperimentConfig":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_json_dict(json.load(fh))
