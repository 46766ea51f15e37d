"""Experiment harness: trial batteries, statistics, extrapolation, searches.

Reproducibility contract: trial ``i`` of a battery draws everything it
needs (graph instance and solver stream) from ``seed_for(base_seed, i)``,
so a battery is fully determined by (config, base_seed) no matter how the
trials are scheduled.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field, replace

import numpy as np

from .coloring import HardColoring, k_d, loss_hard
from .gcn import TrainConfig, detect_oversmoothing
from .generators import (
    FamilySpec,
    gen_erdos_renyi,
    gen_family,
    gen_max_planar,
    gen_regular,
)
from .graph import Graph
from .local_search import discrete_color, full_color, random_coloring, triple_color
from .rng import SearchRng, seed_for
from .train import full_gcn, mod_gcn

__all__ = [
    "ALGORITHMS",
    "GraphSpec",
    "TrialRecord",
    "CaseStudyRow",
    "solve_with",
    "run_trials",
    "confidence_interval",
    "fit_and_extrapolate",
    "oversmoothing_threshold",
    "case_study",
    "write_records",
    "read_records",
    "parse_config",
]

ALGORITHMS = ("discrete", "full", "triple", "mod-gcn", "full-gcn")

DENSITY_GRID = tuple(round(0.10 + 0.01 * i, 2) for i in range(91))


@dataclass(frozen=True)
class GraphSpec:
    """A source of graph instances for trial batteries.

    Random families (``er``, ``regular``, ``max-planar``) draw a fresh
    instance per trial; structured families and ``fixed`` graphs are the
    same every trial.
    """

    family: str
    n: int = 0
    d: float = 0.0
    args: tuple[int, ...] = ()
    graph: Graph | None = None
    name: str = ""

    RANDOM_FAMILIES = ("er", "regular", "max-planar")

    def __post_init__(self):
        known = self.RANDOM_FAMILIES + ("cycle", "complete", "grid", "hex", "tri", "fixed")
        if self.family not in known:
            raise ValueError(f"unknown family {self.family!r}")
        if self.family == "fixed" and self.graph is None:
            raise ValueError("fixed spec needs a graph")

    @property
    def is_random(self) -> bool:
        return self.family in self.RANDOM_FAMILIES

    def instance(self, seed: int) -> Graph:
        if self.family == "er":
            return gen_erdos_renyi(self.n, self.d, seed)
        if self.family == "regular":
            return gen_regular(self.n, int(self.d), seed)
        if self.family == "max-planar":
            return gen_max_planar(self.n, seed)
        if self.family == "fixed":
            return self.graph
        if self.family in ("cycle", "complete"):
            return gen_family(FamilySpec(self.family, (self.n,)))
        return gen_family(FamilySpec(self.family, self.args))

    def label(self) -> str:
        return self.name or self.family


@dataclass(frozen=True)
class TrialRecord:
    algo: str
    family: str
    n: int
    d: float
    k: int
    trial: int
    seed: int
    loss: int
    proper: bool
    ms: float

    def __post_init__(self):
        if self.proper != (self.loss == 0):
            raise ValueError("proper flag must equal (loss == 0)")


def solve_with(
    algo: str, g: Graph, k: int, seed: int, cfg: TrainConfig | None = None
) -> HardColoring:
    """Run one solver on one instance with one seed."""
    if algo == "discrete":
        rng = SearchRng(seed)
        return discrete_color(g, k, random_coloring(g, k, rng), rng)
    if algo == "full":
        return full_color(g, k, SearchRng(seed))
    if algo == "triple":
        return triple_color(g, k, SearchRng(seed))
    if algo == "mod-gcn":
        base = cfg if cfg is not None else TrainConfig()
        return mod_gcn(g, k, replace(base, seed=seed)).hard
    if algo == "full-gcn":
        base = cfg if cfg is not None else TrainConfig()
        return full_gcn(g, k, replace(base, seed=seed)).hard
    raise ValueError(f"unknown algorithm {algo!r}")


def _run_one(
    algo: str, spec: GraphSpec, k: int, trial: int, base_seed: int, cfg: TrainConfig | None
) -> TrialRecord:
    trial_seed = seed_for(base_seed, trial)
    g = spec.instance(seed_for(trial_seed, 1)) if spec.is_random else spec.instance(0)
    t0 = time.perf_counter()
    coloring = solve_with(algo, g, k, seed_for(trial_seed, 2), cfg)
    ms = (time.perf_counter() - t0) * 1000.0
    loss = loss_hard(g, coloring)
    return TrialRecord(
        algo=algo,
        family=spec.label(),
        n=g.n,
        d=spec.d,
        k=k,
        trial=trial,
        seed=trial_seed,
        loss=loss,
        proper=loss == 0,
        ms=max(ms, 1e-9),
    )


def run_trials(
    algo: str,
    spec: GraphSpec,
    k: int,
    trials: int,
    base_seed: int,
    cfg: TrainConfig | None = None,
    jobs: int = 1,
) -> list[TrialRecord]:
    """Run ``trials`` independent trials; records come back in trial order."""
    if algo not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {algo!r}")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [
                pool.submit(_run_one, algo, spec, k, t, base_seed, cfg)
                for t in range(trials)
            ]
            return [f.result() for f in futures]
    return [_run_one(algo, spec, k, t, base_seed, cfg) for t in range(trials)]


def confidence_interval(samples) -> tuple[float, float]:
    """Normal-approximation 95% interval: mean +/- 1.96 * s / sqrt(N)."""
    x = np.asarray(list(samples), dtype=np.float64)
    if x.size < 2:
        raise ValueError("need at least 2 samples")
    mean = float(x.mean())
    s = float(x.std(ddof=1))
    return mean, 1.96 * s / math.sqrt(x.size)


def fit_and_extrapolate(points, targets) -> tuple[float, float, np.ndarray]:
    """Ordinary least squares line through (n, mean loss) points.

    Returns (slope, intercept, predictions at the target n values).
    """
    pts = np.asarray(list(points), dtype=np.float64)
    if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 2:
        raise ValueError("need at least 2 (n, y) points")
    x, y = pts[:, 0], pts[:, 1]
    xbar, ybar = x.mean(), y.mean()
    sxx = float(np.sum((x - xbar) ** 2))
    if sxx == 0:
        raise ValueError("all n values are equal; line is degenerate")
    slope = float(np.sum((x - xbar) * (y - ybar)) / sxx)
    intercept = float(ybar - slope * xbar)
    t = np.asarray(list(targets), dtype=np.float64)
    return slope, intercept, slope * t + intercept


def oversmoothing_threshold(
    n: int,
    depth: int,
    dropout: float,
    base_seed: int,
    probe=None,
    tol: float = 0.01,
    cfg: TrainConfig | None = None,
) -> float | None:
    """Smallest density p in {0.10, ..., 1.00} whose n-coloring run collapses
    to the near-uniform soft assignment, by binary search under the assumption
    that the collapse is monotone in density. None if even p = 1.00 holds up.

    ``probe`` (density -> bool) can be injected for testing; the default
    trains the differentiable solver on one Erdos-Renyi instance per density
    and applies the uniformity detector to the final (not best) soft coloring.
    """
    if depth not in (1, 2):
        raise ValueError("depth must be 1 or 2")
    grid = DENSITY_GRID
    if probe is None:
        base = cfg if cfg is not None else TrainConfig()
        base = replace(base, depth=depth, dropout=dropout)

        def probe(p: float) -> bool:
            i = grid.index(p)
            g = gen_erdos_renyi(n, p * (n - 1), seed_for(base_seed, i))
            result = mod_gcn(g, n, replace(base, seed=seed_for(base_seed, 10_000 + i)))
            return detect_oversmoothing(result.final_soft, tol)

    cache: dict[float, bool] = {}

    def hit(p: float) -> bool:
        if p not in cache:
            cache[p] = bool(probe(p))
        return cache[p]

    if not hit(grid[-1]):
        return None
    lo, hi = 0, len(grid) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if hit(grid[mid]):
            hi = mid
        else:
            lo = mid + 1
    return grid[lo]


@dataclass(frozen=True)
class CaseStudyRow:
    """One table row: best loss at the reported k plus the chromatic bounds."""

    name: str
    order: int
    size: int
    k: int
    best_loss: int
    chi: int | None
    chi_star: int | None
    witnesses: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.chi is not None and self.chi_star is not None and self.chi > self.chi_star:
            raise ValueError("chi must be <= chi_star")


def case_study(
    g: Graph,
    algo: str,
    k_range,
    runs: int,
    base_seed: int,
    name: str = "",
    table_k: int | None = None,
    cfg: TrainConfig | None = None,
) -> CaseStudyRow:
    """Run ``runs`` seeded trials per color budget.

    chi is the smallest budget with at least one proper run, chi_star the
    smallest with all runs proper. chi is re-certified against the stored
    witness coloring before the row is returned.
    """
    ks = sorted(set(int(k) for k in k_range))
    if not ks:
        raise ValueError("k_range must be nonempty")
    best: dict[int, int] = {}
    witnesses: dict[int, HardColoring] = {}
    all_proper: dict[int, bool] = {}
    for k in ks:
        k_seed = seed_for(base_seed, k)
        losses = []
        for run in range(runs):
            coloring = solve_with(algo, g, k, seed_for(k_seed, run), cfg)
            loss = loss_hard(g, coloring)
            losses.append(loss)
            if k not in best or loss < best[k]:
                best[k] = loss
                witnesses[k] = coloring
        all_proper[k] = all(x == 0 for x in losses)
    chi = next((k for k in ks if best[k] == 0), None)
    chi_star = next((k for k in ks if all_proper[k]), None)
    if chi is not None and loss_hard(g, witnesses[chi]) != 0:
        raise AssertionError("witness coloring failed re-verification")
    report_k = table_k if table_k is not None else ks[0]
    if report_k not in best:
        raise ValueError("table_k must be one of the tested budgets")
    return CaseStudyRow(
        name=name,
        order=g.n,
        size=g.m,
        k=report_k,
        best_loss=best[report_k],
        chi=chi,
        chi_star=chi_star,
        witnesses=witnesses,
    )


# ---------------------------------------------------------------------------
# CSV and config I/O

CSV_HEADER = "algo,family,n,d,k,trial,seed,loss,proper,ms"


def write_records(records, fh) -> None:
    fh.write(CSV_HEADER + "\n")
    for r in records:
        fh.write(
            f"{r.algo},{r.family},{r.n},{r.d!r},{r.k},{r.trial},{r.seed},"
            f"{r.loss},{str(r.proper).lower()},{r.ms!r}\n"
        )


def read_records(fh) -> list[TrialRecord]:
    header = fh.readline().strip()
    if header != CSV_HEADER:
        raise ValueError(f"unexpected CSV header {header!r}")
    out = []
    for line in fh:
        if not line.strip():
            continue
        algo, family, n, d, k, trial, seed, loss, proper, ms = line.strip().split(",")
        out.append(
            TrialRecord(
                algo=algo,
                family=family,
                n=int(n),
                d=float(d),
                k=int(k),
                trial=int(trial),
                seed=int(seed),
                loss=int(loss),
                proper=proper == "true",
                ms=float(ms),
            )
        )
    return out


def summarize_records(records) -> tuple[str, str]:
    """Aggregate trial records per (algo, family, n, d, k).

    Returns (csv_text, aligned_text); both carry the mean loss with its 95%
    halfwidth, the proper-coloring rate, and the mean wall time.
    """
    cells: dict[tuple, list[TrialRecord]] = {}
    for r in records:
        cells.setdefault((r.algo, r.family, r.n, r.d, r.k), []).append(r)
    rows = []
    for key in sorted(cells):
        rs = cells[key]
        losses = [r.loss for r in rs]
        if len(losses) >= 2:
            mean, half = confidence_interval(losses)
        else:
            mean, half = float(losses[0]), 0.0
        rate = sum(r.proper for r in rs) / len(rs)
        ms = sum(r.ms for r in rs) / len(rs)
        rows.append((*key, len(rs), mean, half, rate, ms))
    header = ["algo", "family", "n", "d", "k", "trials", "mean_loss", "ci95", "proper_rate", "mean_ms"]
    csv_lines = [",".join(header)]
    for row in rows:
        csv_lines.append(
            f"{row[0]},{row[1]},{row[2]},{row[3]!r},{row[4]},{row[5]},"
            f"{row[6]:.6f},{row[7]:.6f},{row[8]:.4f},{row[9]:.3f}"
        )
    table = [
        [str(r[0]), str(r[1]), str(r[2]), str(r[3]), str(r[4]), str(r[5]),
         f"{r[6]:.2f} +/- {r[7]:.2f}", f"{r[8] * 100:.0f}%", f"{r[9]:.1f}"]
        for r in rows
    ]
    head = ["algo", "family", "n", "d", "k", "trials", "mean loss", "proper", "ms"]
    widths = [max(len(head[i]), *(len(t[i]) for t in table)) if table else len(head[i]) for i in range(len(head))]
    fmt = "  ".join("{:<%d}" % w for w in widths)
    text_lines = [fmt.format(*head)] + [fmt.format(*t) for t in table]
    return "\n".join(csv_lines) + "\n", "\n".join(text_lines) + "\n"


def parse_config(text: str) -> dict[str, str]:
    """key=value lines; blank lines and ``#`` comments ignored."""
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected key=value, got {raw!r}")
        key, value = line.split("=", 1)
        out[key.strip()] = value.strip()
    return out
