"""Monte Carlo throughput-vs-budget experiments.

A run is described by a flat key/value YAML document (see ``DEFAULT_CONFIG``).
Realizations are keyed by ``(seed, trial)`` so a trial sees the same channel
at every budget point, for every scheme and both algorithms. With
``common_random_numbers: false`` the point index is mixed into the key as
well, giving a fresh channel per budget point (still shared by schemes and
algorithms at that point, so EGC/ZFC and original/improved stay paired).
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field, fields

import numpy as np
import yaml

from .allocation import ALGORITHMS, ASSIGNERS, AllocationError, fill_channels, validate_allocation
from .fading import make_generator, sample_channel_gains
from .model import CombiningScheme, ModelError, SimConfig, build_power_matrix

SCHEMES = tuple(s.value for s in CombiningScheme)

CSV_HEADER = (
    "scheme",
    "algorithm",
    "pmax_dbw",
    "trial",
    "seed",
    "throughput",
    "residual_power",
    "groups_assigned",
)
SUMMARY_HEADER = (
    "scheme",
    "algorithm",
    "pmax_dbw",
    "trials",
    "mean_throughput",
    "std_throughput",
    "mean_residual_power",
    "mean_groups_assigned",
)
COMPARE_HEADER = (
    "scheme",
    "pmax_dbw",
    "trials",
    "mean_original",
    "mean_improved",
    "mean_gap",
    "frac_improved_ge_original",
)

DEFAULT_CONFIG = """\
# channel layout
n_channels: 128
n_groups: 8
n_users: 8
# link target and noise
ber: 0.01
noise_psd: 0.16
# fading draw, dB bounds; fading_distribution: uniform_db | rayleigh
fading_db_min: 0.0
fading_db_max: 12.0
fading_distribution: uniform_db
db_convention: amplitude
# budget sweep in dBW, stop inclusive
pmax_dbw_start: -20.0
pmax_dbw_stop: 30.0
pmax_dbw_step: 2.5
trials: 100
seed: 0
schemes: all
algorithms: both
common_random_numbers: true
"""


class ConfigError(ValueError):
    pass


def fmt(x: float) -> str:
    return format(float(x), ".9g")


def dbw_to_watts(x: float) -> float:
    return 10.0 ** (x / 10.0)


def watts_to_dbw(p: float) -> float:
    return 10.0 * math.log10(p) if p > 0 else -math.inf


def pmax_grid(start: float, stop: float, step: float) -> tuple:
    """Budget points ``start, start+step, ...`` up to and including ``stop``."""
    if not all(map(math.isfinite, (start, stop, step))):
        raise ConfigError("pmax_dbw: sweep bounds must be finite")
    if step <= 0:
        raise ConfigError("pmax_dbw_step: must be > 0")
    if stop < start:
        raise ConfigError("pmax_dbw_stop: must be >= pmax_dbw_start")
    n = int(math.floor((stop - start) / step + 1e-9)) + 1
    return tuple(start + k * step for k in range(n))


@dataclass(frozen=True)
class RunConfig:
    sim: SimConfig = field(default_factory=SimConfig)
    pmax_dbw: tuple = pmax_grid(-20.0, 30.0, 2.5)
    trials: int = 100
    seed: int = 0
    schemes: tuple = SCHEMES
    algorithms: tuple = ALGORITHMS
    common_random_numbers: bool = True


_SIM_KEYS = {f.name: f.type for f in fields(SimConfig) if f.init}
_RUN_KEYS = {
    "pmax_dbw_start",
    "pmax_dbw_stop",
    "pmax_dbw_step",
    "trials",
    "seed",
    "schemes",
    "algorithms",
    "common_random_numbers",
}
_INT_KEYS = {"n_channels", "n_groups", "n_users", "trials", "seed"}
_FLOAT_KEYS = {"ber", "noise_psd", "fading_db_min", "fading_db_max"} | {
    "pmax_dbw_start",
    "pmax_dbw_stop",
    "pmax_dbw_step",
}


def _coerce(key, value):
    if key in _INT_KEYS:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"{key}: expected an integer, got {value!r}")
        return value
    if key in _FLOAT_KEYS:
        # YAML 1.1 reads "1e-2" (no dot) as a string
        if isinstance(value, str):
            try:
                return float(value)
            except ValueError:
                pass
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"{key}: expected a number, got {value!r}")
        return float(value)
    if key == "common_random_numbers":
        if not isinstance(value, bool):
            raise ConfigError(f"{key}: expected true/false, got {value!r}")
        return value
    return value


def parse_schemes(value) -> tuple:
    items = [value] if isinstance(value, str) else list(value)
    if items == ["all"]:
        return SCHEMES
    try:
        return tuple(dict.fromkeys(CombiningScheme.parse(v).value for v in items))
    except ModelError as exc:
        raise ConfigError(f"schemes: {exc}") from None


def parse_algorithms(value) -> tuple:
    items = [value] if isinstance(value, str) else list(value)
    if items == ["both"]:
        return ALGORITHMS
    for v in items:
        if v not in ALGORITHMS:
            raise ConfigError(f"algorithms: unknown algorithm {v!r}")
    return tuple(dict.fromkeys(items))


def parse_config(text: str, **overrides) -> RunConfig:
    """Build a validated ``RunConfig`` from a flat YAML document.

    Missing keys take the defaults in ``DEFAULT_CONFIG``; unknown keys are
    rejected. ``overrides`` are applied on top of the document (CLI flags).
    """
    try:
        doc = yaml.safe_load(text) if text.strip() else None
    except yaml.YAMLError as exc:
        raise ConfigError(f"malformed config document: {exc}") from None
    if doc is None:
        doc = {}
    if not isinstance(doc, dict):
        raise ConfigError("config document must be a flat mapping of key: value")
    doc.update({k: v for k, v in overrides.items() if v is not None})

    unknown = sorted(set(doc) - set(_SIM_KEYS) - _RUN_KEYS)
    if unknown:
        raise ConfigError(f"{unknown[0]}: unknown configuration key")
    doc = {k: _coerce(k, v) for k, v in doc.items()}

    sim = SimConfig(**{k: v for k, v in doc.items() if k in _SIM_KEYS})
    grid = pmax_grid(
        doc.get("pmax_dbw_start", -20.0),
        doc.get("pmax_dbw_stop", 30.0),
        doc.get("pmax_dbw_step", 2.5),
    )
    trials = doc.get("trials", 100)
    if trials < 1:
        raise ConfigError("trials: must be >= 1")
    seed = doc.get("seed", 0)
    if not 0 <= seed < 2**64:
        raise ConfigError("seed: must be an unsigned 64-bit integer")
    return RunConfig(
        sim=sim,
        pmax_dbw=grid,
        trials=trials,
        seed=seed,
        schemes=parse_schemes(doc.get("schemes", "all")),
        algorithms=parse_algorithms(doc.get("algorithms", "both")),
        common_random_numbers=doc.get("common_random_numbers", True),
    )


@dataclass(frozen=True)
class TrialRecord:
    scheme: str
    algorithm: str
    p_max_dbw: float
    p_max_watts: float
    trial_index: int
    seed: int
    throughput: int
    residual_power: float
    groups_assigned: int

    def csv_row(self) -> list:
        return [
            self.scheme,
            self.algorithm,
            fmt(self.p_max_dbw),
            self.trial_index,
            self.seed,
            self.throughput,
            fmt(self.residual_power),
            self.groups_assigned,
        ]


def _realization(cfg: SimConfig, seed: int, trial: int, point: int | None):
    key = (trial,) if point is None else (trial, point)
    return sample_channel_gains(cfg, make_generator(seed, *key))


def _records_for(cfg, gains, scheme, algorithm, budgets, trial, seed, audit=None):
    """Allocate one realization over a list of (dBW, watts) budgets."""
    pm = build_power_matrix(gains, scheme, cfg.beta, cfg.noise_psd)
    a = ASSIGNERS[algorithm](pm)
    s = cfg.subcarriers_per_group
    out = []
    for dbw, watts in budgets:
        r = fill_channels(a, pm, watts, s, algorithm)
        report = validate_allocation(r, pm, watts, s)
        if audit is not None:
            audit.append(report)
        if not report.ok:
            raise AllocationError(
                f"constraint violation ({scheme}, {algorithm}, trial {trial}, "
                f"{dbw} dBW): {report.violations}"
            )
        out.append(
            TrialRecord(
                scheme=scheme,
                algorithm=algorithm,
                p_max_dbw=dbw,
                p_max_watts=watts,
                trial_index=trial,
                seed=seed,
                throughput=r.throughput,
                residual_power=r.residual_power,
                groups_assigned=r.groups_used,
            )
        )
    return out


def run_trial(
    cfg: SimConfig,
    seed: int,
    scheme,
    algorithm: str,
    p_max_watts: float,
    trial_index: int = 0,
    point_index: int | None = None,
) -> TrialRecord:
    """One realization, one scheme, one algorithm, one budget.

    ``point_index`` selects the fresh-per-point stream; leave it ``None`` for
    the shared per-trial realization used by sweeps by default.
    """
    scheme = CombiningScheme.parse(scheme).value
    if algorithm not in ALGORITHMS:
        raise ConfigError(f"algorithm: unknown algorithm {algorithm!r}")
    gains = _realization(cfg, seed, trial_index, point_index)
    budget = [(watts_to_dbw(p_max_watts), float(p_max_watts))]
    return _records_for(cfg, gains, scheme, algorithm, budget, trial_index, seed)[0]


def run_sweep(run: RunConfig, audit: list | None = None) -> list:
    """All trial records, ordered by (scheme, algorithm, p_max, trial).

    Every allocation is checked against the constraints; pass a list as
    ``audit`` to collect the individual ``ConstraintReport`` objects.
    """
    cfg = run.sim
    budgets = [(x, dbw_to_watts(x)) for x in run.pmax_dbw]
    # table[scheme][algorithm][point][trial]
    table = {
        s: {a: [[None] * run.trials for _ in budgets] for a in run.algorithms}
        for s in run.schemes
    }
    for t in range(run.trials):
        if run.common_random_numbers:
            batches = [(_realization(cfg, run.seed, t, None), list(enumerate(budgets)))]
        else:
            batches = [
                (_realization(cfg, run.seed, t, i), [(i, b)]) for i, b in enumerate(budgets)
            ]
        for gains, points in batches:
            for s in run.schemes:
                for a in run.algorithms:
                    recs = _records_for(
                        cfg, gains, s, a, [b for _, b in points], t, run.seed, audit
                    )
                    for (i, _), rec in zip(points, recs):
                        table[s][a][i][t] = rec
    return [
        rec
        for s in run.schemes
        for a in run.algorithms
        for per_point in table[s][a]
        for rec in per_point
    ]


@dataclass(frozen=True)
class SummaryRow:
    scheme: str
    algorithm: str
    p_max_dbw: float
    trials: int
    mean_throughput: float
    std_throughput: float
    mean_residual_power: float
    mean_groups_assigned: float

    def csv_row(self) -> list:
        return [
            self.scheme,
            self.algorithm,
            fmt(self.p_max_dbw),
            self.trials,
            fmt(self.mean_throughput),
            fmt(self.std_throughput),
            fmt(self.mean_residual_power),
            fmt(self.mean_groups_assigned),
        ]


def _group(records, key):
    groups = {}
    for r in records:
        groups.setdefault(key(r), []).append(r)
    return groups


def summarize(records) -> list:
    """Per (scheme, algorithm, budget) mean and population std of throughput."""
    rows = []
    for (s, a, x), rs in _group(records, lambda r: (r.scheme, r.algorithm, r.p_max_dbw)).items():
        tp = np.array([r.throughput for r in rs], dtype=np.float64)
        rows.append(
            SummaryRow(
                scheme=s,
                algorithm=a,
                p_max_dbw=x,
                trials=len(rs),
                mean_throughput=float(tp.mean()),
                std_throughput=float(tp.std()),
                mean_residual_power=float(np.mean([r.residual_power for r in rs])),
                mean_groups_assigned=float(np.mean([r.groups_assigned for r in rs])),
            )
        )
    return rows


def write_sweep_csv(fh, records, summary=None):
    """Trial rows under ``CSV_HEADER``, then a blank line and the summary block."""
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(CSV_HEADER)
    w.writerows(r.csv_row() for r in records)
    if summary is None:
        summary = summarize(records)
    if summary:
        fh.write("\n")
        w.writerow(SUMMARY_HEADER)
        w.writerows(r.csv_row() for r in summary)


def sweep_csv_text(records, summary=None) -> str:
    buf = io.StringIO(newline="")
    write_sweep_csv(buf, records, summary)
    return buf.getvalue()


def read_sweep_csv(text: str):
    """Split a sweep CSV back into (trial rows, summary rows) as dicts of strings."""
    head, _, tail = text.partition("\n\n")
    trials = list(csv.DictReader(io.StringIO(head)))
    summary = list(csv.DictReader(io.StringIO(tail))) if tail.strip() else []
    return trials, summary


@dataclass(frozen=True)
class CompareRow:
    scheme: str
    p_max_dbw: float
    trials: int
    mean_original: float
    mean_improved: float
    mean_gap: float
    frac_improved_ge_original: float

    @property
    def regression(self) -> bool:
        return self.mean_improved < self.mean_original

    def csv_row(self) -> list:
        return [
            self.scheme,
            fmt(self.p_max_dbw),
            self.trials,
            fmt(self.mean_original),
            fmt(self.mean_improved),
            fmt(self.mean_gap),
            fmt(self.frac_improved_ge_original),
        ]


def compare_records(records) -> list:
    """Pair original/improved records by (scheme, budget, trial) and average."""
    by_key = {(r.scheme, r.p_max_dbw, r.trial_index, r.algorithm): r for r in records}
    points = dict.fromkeys((r.scheme, r.p_max_dbw) for r in records)
    rows = []
    for s, x in points:
        trials = sorted(
            t
            for (s2, x2, t, a) in by_key
            if s2 == s and x2 == x and a == "original" and (s, x, t, "improved") in by_key
        )
        if not trials:
            raise ConfigError("compare needs both original and improved records")
        orig = np.array([by_key[s, x, t, "original"].throughput for t in trials], dtype=float)
        impr = np.array([by_key[s, x, t, "improved"].throughput for t in trials], dtype=float)
        rows.append(
            CompareRow(
                scheme=s,
                p_max_dbw=x,
                trials=len(trials),
                mean_original=float(orig.mean()),
                mean_improved=float(impr.mean()),
                mean_gap=float((impr - orig).mean()),
                frac_improved_ge_original=float(np.mean(impr >= orig)),
            )
        )
    return rows


def compare_csv_text(rows) -> str:
    buf = io.StringIO(newline="")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COMPARE_HEADER)
    w.writerows(r.csv_row() for r in rows)
    return buf.getvalue()


def compare_text(rows) -> str:
    lines = [
        f"{'scheme':<6} {'pmax_dbw':>9} {'original':>10} {'improved':>10} {'gap':>8} {'impr>=orig':>10}"
    ]
    for r in rows:
        flag = "  REGRESSION" if r.regression else ""
        lines.append(
            f"{r.scheme:<6} {r.p_max_dbw:>9.3f} {r.mean_original:>10.3f} {r.mean_improved:>10.3f} "
            f"{r.mean_gap:>8.3f} {r.frac_improved_ge_original:>10.3f}{flag}"
        )
    return "\n".join(lines) + "\n"


def compare_report(run: RunConfig):
    """Run the sweep for both algorithms and return (text, csv, rows, ok)."""
    if set(run.algorithms) != set(ALGORITHMS):
        raise ConfigError("algorithms: compare requires both original and improved")
    rows = compare_records(run_sweep(run))
    ok = not any(r.regression for r in rows)
    return compare_text(rows), compare_csv_text(rows), rows, ok


@dataclass
class OracleCheck:
    instances: int
    violations: list
    gaps_original: np.ndarray
    gaps_improved: np.ndarray

    @property
    def ok(self) -> bool:
        return not self.violations


def oracle_check(
    n_instances: int = 300,
    n_groups: int = 3,
    n_users: int = 3,
    s: int = 4,
    seed: int = 0,
    fading_db: tuple = (0.0, 12.0),
    relaxed: bool = False,
    ber: float = 1e-2,
    noise_psd: float = 0.16,
    audit: list | None = None,
) -> OracleCheck:
    """Compare both greedy algorithms against the exhaustive optimum.

    Budgets are drawn uniformly between zero and the cost of filling every
    group at its cheapest user, so both tight and slack regimes are covered.
    """
    from .oracle import exhaustive_optimal

    cfg = SimConfig(
        n_channels=n_groups * s,
        n_groups=n_groups,
        n_users=n_users,
        ber=ber,
        noise_psd=noise_psd,
        fading_db_min=fading_db[0],
        fading_db_max=fading_db[1],
    )
    violations = []
    gaps_o, gaps_i = [], []
    for i in range(n_instances):
        gen = make_generator(seed, i)
        pm = build_power_matrix(sample_channel_gains(cfg, gen), "mrc", cfg.beta, cfg.noise_psd)
        p_max = float(gen.uniform(0.0, 1.0) * s * pm.p.min(axis=1).sum())
        rep = exhaustive_optimal(pm, p_max, s, relaxed=relaxed)
        for name, r in (("oracle", rep.best), ("original", rep.original), ("improved", rep.improved)):
            check = validate_allocation(r, pm, p_max, s)
            if audit is not None:
                audit.append(check)
            if not check.ok:
                violations.append((i, name, check.violations))
        if rep.gap_vs_original < 0 or rep.gap_vs_improved < 0:
            violations.append((i, "dominance", rep.gap_vs_original, rep.gap_vs_improved))
        gaps_o.append(rep.gap_vs_original)
        gaps_i.append(rep.gap_vs_improved)
    return OracleCheck(n_instances, violations, np.array(gaps_o), np.array(gaps_i))
