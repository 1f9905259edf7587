"""Universal measurement of n copies and the convergence sweep around it."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .divergence import SUPPORT_TOL, measured_divergence, pinched_divergence, quantum_relative_entropy
from .errors import NotCommuting, UnivMeasError
from .io import atomic_write, fmt, json_number
from .matkernel import DEFAULT_DIM_CAP, comm_norm
from .measurement import Pvm, product_pvm, refines, width
from .quantum_state import (
    DensityMatrix,
    parse_state_spec,
    random_state,
    spectral_pvm,
    spectral_pvm_of_power,
    tensor_power,
)
from .schur_weyl import isotypic_pvm

SLACK = 1e-8
CSV_COLUMNS = ("n", "target_nats", "measured_rate", "pinched_rate", "gap", "bound", "outcomes")


def universal_pvm(
    rho, n: int, cluster_tol: float = 1e-9, dim_cap: int = DEFAULT_DIM_CAP
) -> Pvm:
    """Isotypic PVM of n copies refined by the spectral PVM of ``rho^{(x)n}``.

    Depends on ``rho`` only; the same measurement serves every ``sigma``.
    """
    k = rho.dim if isinstance(rho, DensityMatrix) else np.asarray(rho).shape[0]
    iso = isotypic_pvm(n, k, dim_cap)
    spec = spectral_pvm_of_power(rho, n, cluster_tol, dim_cap)
    try:
        return product_pvm(iso, spec)
    except NotCommuting as exc:
        raise RuntimeError(f"isotypic and spectral PVMs failed to commute: {exc}") from exc


@dataclass(frozen=True)
class SweepRecord:
    n: int
    target: float
    measured_rate: float
    pinched_rate: float
    gap: float
    bound: float
    outcome_count: int
    width_bound: float = math.nan

    @property
    def finite(self) -> bool:
        return math.isfinite(self.target)

    def violations(self, slack: float = SLACK) -> list[str]:
        if not self.finite:
            return []
        out = []
        if self.gap < -slack:
            out.append(f"n={self.n}: gap {self.gap:.3e} is negative")
        if self.gap > self.bound + slack:
            out.append(f"n={self.n}: gap {self.gap:.6g} exceeds bound {self.bound:.6g}")
        if self.gap > self.width_bound + slack:
            out.append(f"n={self.n}: gap {self.gap:.6g} exceeds log-width bound {self.width_bound:.6g}")
        if self.measured_rate > self.target + slack:
            out.append(f"n={self.n}: measured rate exceeds target")
        if self.pinched_rate > self.target + slack:
            out.append(f"n={self.n}: pinched rate exceeds target")
        return out

    def row(self) -> list[str]:
        return [
            str(self.n),
            fmt(self.target),
            fmt(self.measured_rate),
            fmt(self.pinched_rate),
            fmt(self.gap),
            fmt(self.bound),
            str(self.outcome_count),
        ]


def default_n_max(k: int) -> int:
    return {1: 8, 2: 8, 3: 5}.get(k, 3)


@dataclass
class SweepConfig:
    rho: str | DensityMatrix
    sigma: str | DensityMatrix
    n_min: int = 1
    n_max: int | None = None
    cluster_tol: float = 1e-9
    support_tol: float = SUPPORT_TOL
    seed: int = 0
    dim_cap: int = DEFAULT_DIM_CAP
    output: str | None = None
    states: tuple = field(default=(), init=False, repr=False)

    def resolve(self) -> tuple[DensityMatrix, DensityMatrix]:
        """Parse the state specs and fill in ``n_max``; raises on invalid settings."""
        rho = self.rho if isinstance(self.rho, DensityMatrix) else parse_state_spec(self.rho, self.seed)
        sigma = (
            self.sigma
            if isinstance(self.sigma, DensityMatrix)
            else parse_state_spec(self.sigma, self.seed + 1)
        )
        if rho.dim != sigma.dim:
            raise UnivMeasError(f"rho has dimension {rho.dim} but sigma has {sigma.dim}")
        if self.n_max is None:
            self.n_max = default_n_max(rho.dim)
        if self.n_min < 1 or self.n_max < self.n_min:
            raise UnivMeasError(f"invalid n range [{self.n_min}, {self.n_max}]")
        if rho.dim**self.n_max > self.dim_cap:
            raise UnivMeasError(
                f"k^n_max = {rho.dim}^{self.n_max} exceeds the dimension cap {self.dim_cap}"
            )
        return rho, sigma


def sweep_record(
    rho: DensityMatrix,
    sigma: DensityMatrix,
    n: int,
    target: float | None = None,
    cluster_tol: float = 1e-9,
    support_tol: float = SUPPORT_TOL,
    dim_cap: int = DEFAULT_DIM_CAP,
) -> SweepRecord:
    k = rho.dim
    if target is None:
        target = quantum_relative_entropy(sigma, rho, support_tol)
    bound = (k - 1) * math.log(n + 1) / n
    m = universal_pvm(rho, n, cluster_tol, dim_cap)
    width_bound = math.log(isotypic_pvm(n, k, dim_cap).irrep_width) / n
    if not math.isfinite(target):
        return SweepRecord(n, math.inf, math.inf, math.inf, math.inf, bound, len(m), width_bound)
    sn = tensor_power(sigma, n, dim_cap)
    rn = tensor_power(rho, n, dim_cap)
    measured = measured_divergence(m, sn, rn) / n
    pinched = pinched_divergence(rho, sigma, n, cluster_tol, dim_cap) / n
    return SweepRecord(n, target, measured, pinched, target - measured, bound, len(m), width_bound)


def run_sweep(cfg: SweepConfig) -> list[SweepRecord]:
    """One record per n in ``[n_min, n_max]``, ascending.

    When the support of sigma leaves that of rho every record carries
    ``target = inf`` and the sweep is non-finite.
    """
    rho, sigma = cfg.resolve()
    target = quantum_relative_entropy(sigma, rho, cfg.support_tol)
    return [
        sweep_record(rho, sigma, n, target, cfg.cluster_tol, cfg.support_tol, cfg.dim_cap)
        for n in range(cfg.n_min, cfg.n_max + 1)
    ]


def uniformity_sweep(rho, n_values, num_sigma: int, seed: int = 0, dim_cap: int = DEFAULT_DIM_CAP):
    """Worst gap over ``num_sigma`` random states for each n.

    Returns a list of ``(n, max_gap, bound)``. Sampling cannot prove uniform
    convergence; it exercises the sigma-independent bound on many inputs.
    """
    sigmas = [random_state(rho.dim, seed + i) for i in range(num_sigma)]
    out = []
    for n in n_values:
        gaps = [sweep_record(rho, s, n, dim_cap=dim_cap).gap for s in sigmas]
        out.append((n, max(gaps), (rho.dim - 1) * math.log(n + 1) / n))
    return out


def records_to_csv(records) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in records:
        writer.writerow(r.row())
    return buf.getvalue()


def records_to_json(records) -> str:
    rows = []
    for r in records:
        rows.append(
            {
                "n": r.n,
                "target_nats": json_number(r.target),
                "measured_rate": json_number(r.measured_rate),
                "pinched_rate": json_number(r.pinched_rate),
                "gap": json_number(r.gap),
                "bound": json_number(r.bound),
                "outcomes": r.outcome_count,
            }
        )
    return json.dumps(rows, indent=1)


def write_records(records, path) -> None:
    text = records_to_json(records) if str(path).endswith(".json") else records_to_csv(records)
    atomic_write(path, text)


def read_records_csv(path) -> list[SweepRecord]:
    with open(path, encoding="utf-8", newline="") as fh:
        rows = list(csv.DictReader(fh))
    return [
        SweepRecord(
            int(r["n"]),
            float(r["target_nats"]),
            float(r["measured_rate"]),
            float(r["pinched_rate"]),
            float(r["gap"]),
            float(r["bound"]),
            int(r["outcomes"]),
        )
        for r in rows
    ]


def plot_script(csv_path: str, image_path: str = "sweep.png") -> str:
    return f"""set terminal pngcairo size 800,500
set output '{image_path}'
set datafile separator ','
set key autotitle columnhead
set xlabel 'n'
set ylabel 'nats'
plot '{csv_path}' using 1:2 with lines title 'D(sigma||rho)', \\
     '' using 1:3 with linespoints title 'measured rate', \\
     '' using 1:4 with linespoints title 'pinched rate', \\
     '' using 1:5 with linespoints title 'gap', \\
     '' using 1:6 with lines dashtype 2 title '(k-1) ln(n+1)/n'
"""


@dataclass
class SandwichReport:
    divergence: float
    measured: float
    log_width: float
    hypothesis_failures: list[str]
    lower_ok: bool
    upper_ok: bool

    @property
    def hypotheses_ok(self) -> bool:
        return not self.hypothesis_failures

    @property
    def passed(self) -> bool:
        return self.hypotheses_ok and self.lower_ok and self.upper_ok

    def as_dict(self) -> dict:
        d = asdict(self)
        d.update(hypotheses_ok=self.hypotheses_ok, passed=self.passed)
        return d


def check_sandwich_bound(
    e: Pvm,
    f: Pvm,
    sigma,
    rho,
    slack: float = SLACK,
    commute_tol: float = 1e-8,
    cluster_tol: float = 1e-9,
) -> SandwichReport:
    """Evaluate ``D_F <= D <= D_F + ln w(E)`` and its hypotheses.

    Hypotheses: sigma and rho commute with every element of ``e``; ``f``
    refines ``e`` and the spectral PVM of ``rho``. Failures are listed in
    the report rather than raised.
    """
    failures = []
    for name, state in (("sigma", sigma), ("rho", rho)):
        worst = max(comm_norm(x, state) for x in e.elements)
        if worst > commute_tol:
            failures.append(f"{name} does not commute with E (commutator {worst:.3e})")
    if not refines(f, e)[0]:
        failures.append("F does not refine E")
    if not refines(f, spectral_pvm(rho, cluster_tol))[0]:
        failures.append("F does not refine the spectral PVM of rho")

    d = quantum_relative_entropy(sigma, rho)
    d_f = measured_divergence(f, sigma, rho)
    log_w = math.log(width(e))
    return SandwichReport(
        divergence=d,
        measured=d_f,
        log_width=log_w,
        hypothesis_failures=failures,
        lower_ok=d_f <= d + slack,
        upper_ok=d <= d_f + log_w + slack,
    )
