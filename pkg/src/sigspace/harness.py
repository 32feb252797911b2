"""Experiment presets, deterministic trial execution, and CSV/SVG emission.

Every trial derives its random stream from (master_seed, experiment id,
signal index, grid index, trial index), so results are bit-identical for
any parallelism level or worker interleaving. The measurement matrix, the
support placement and the coefficients are all redrawn every trial.
"""

from __future__ import annotations

import concurrent.futures
import functools
import time
import xml.etree.ElementTree as ET
import zlib
from dataclasses import dataclass, field, replace

import numpy as np

from . import solvers
from .model import (
    PERFECT_RECOVERY_DB,
    Dictionary,
    ProblemInstance,
    SeededRng,
    build_overcomplete_dft,
    gaussian_measurement,
    measure,
    snr_db,
    synthesize,
)
from .projections import ProjectionKind
from .signals import (
    COMPLEX_GAUSSIAN,
    C_CLUSTERS,
    TWO_CLUSTER_SEP,
    UNIFORM_SEP,
    StructureSpec,
    draw_coefficients,
    generate_support,
)
from .solvers import SolverConfig
from .sscosamp import SscosampConfig, UsscosampVariant, sscosamp, usscosamp

_SS_PROJECTIONS = {
    "sscosamp_cosamp": (ProjectionKind.COSAMP, ProjectionKind.COSAMP),
    "sscosamp_omp": (ProjectionKind.OMP, ProjectionKind.OMP),
    "sscosamp_l1": (ProjectionKind.L1, ProjectionKind.L1),
    "sscosamp_omp_id_cosamp_prune": (ProjectionKind.OMP, ProjectionKind.COSAMP),
    "sscosamp_cosamp_id_omp_prune": (ProjectionKind.COSAMP, ProjectionKind.OMP),
}

# Basis pursuit inside the l1 projection feeds only a top-s magnitude
# ranking, so it runs at a lighter tolerance than the standalone solver;
# two full-precision solves per outer iteration would dominate the budget.
_L1_PROJECTION_ADMM = {"admm_tol": 1e-5, "admm_max_iter": 1000}

ALGORITHM_IDS = (
    "omp",
    "cosamp",
    "nomp",
    "eps_omp",
    "l1",
    *_SS_PROJECTIONS,
    "usscosamp_alt",
    "usscosamp_union",
)

_SWEEP_KINDS = ("measurements", "separation", "sparsity", "epsilon", "cluster_count")
_GRID_PARAM = {
    "measurements": "m",
    "separation": "separation",
    "sparsity": "k",
    "epsilon": "epsilon",
    "cluster_count": "clusters",
}

CSV_HEADER = (
    "preset,algorithm,signal_class,n,d,k,grid_param,grid_value,"
    "trials,perfect_pct,mean_snr_db,mean_runtime_ms,seed"
)


@dataclass(frozen=True)
class Sweep:
    """The experiment's grid axis."""

    kind: str
    values: tuple[float, ...]
    two_cluster: bool = False

    def __post_init__(self):
        if self.kind not in _SWEEP_KINDS:
            raise ValueError(f"unknown sweep kind {self.kind!r}; valid: {_SWEEP_KINDS}")
        values = tuple(float(v) for v in self.values)
        object.__setattr__(self, "values", values)
        if not values:
            raise ValueError("sweep needs at least one grid value")
        if any(b <= a for a, b in zip(values, values[1:])):
            raise ValueError("sweep values must be strictly ascending")

    @property
    def grid_param(self) -> str:
        return _GRID_PARAM[self.kind]


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything needed to reproduce one experiment end to end."""

    name: str
    algorithms: tuple[str, ...]
    signals: tuple[StructureSpec, ...]
    sweep: Sweep
    n: int = 256
    d: int = 1024
    k: int = 8
    m: int = 100
    trials: int = 100
    master_seed: int = 42
    nomp_window: int = 6
    epsilon: float = 0.9539
    solver_cfg: SolverConfig = field(default_factory=SolverConfig)

    def __post_init__(self):
        object.__setattr__(self, "algorithms", tuple(self.algorithms))
        object.__setattr__(self, "signals", tuple(self.signals))
        for alg in self.algorithms:
            if alg not in ALGORITHM_IDS:
                raise ValueError(f"unknown algorithm {alg!r}; valid: {ALGORITHM_IDS}")
        if not self.algorithms or not self.signals:
            raise ValueError("config needs at least one algorithm and one signal class")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.d % self.n:
            raise ValueError("d must be a multiple of n")

    @property
    def experiment_id(self) -> int:
        return zlib.crc32(self.name.encode("utf-8"))


@dataclass(frozen=True)
class TrialRecord:
    algorithm: str
    signal_class: str
    grid_value: float
    trial_index: int
    snr_db: float
    perfect: bool
    runtime_ms: float


@dataclass(frozen=True)
class ResultRow:
    algorithm: str
    signal_class: str
    grid_param: str
    grid_value: float
    n: int
    d: int
    k: int
    trials: int
    perfect_pct: float
    mean_snr_db: float
    mean_runtime_ms: float


@dataclass(frozen=True)
class ResultTable:
    config: ExperimentConfig
    rows: tuple[ResultRow, ...]

    def perfect_rate(self, algorithm: str, signal_class: str | None = None, grid_value=None) -> float:
        """Recovery percentage of the unique matching row."""
        hits = [
            row
            for row in self.rows
            if row.algorithm == algorithm
            and (signal_class is None or row.signal_class == signal_class)
            and (grid_value is None or row.grid_value == float(grid_value))
        ]
        if len(hits) != 1:
            raise KeyError(
                f"{len(hits)} rows match ({algorithm!r}, {signal_class!r}, {grid_value!r})"
            )
        return hits[0].perfect_pct


@functools.lru_cache(maxsize=8)
def _cached_dft(n: int, oversampling: int) -> Dictionary:
    return build_overcomplete_dft(n, oversampling)


def _materialize(cfg: ExperimentConfig, spec: StructureSpec, grid_value: float):
    """Resolve (m, k, epsilon, signal spec) for one grid point."""
    m, k, eps = cfg.m, cfg.k, cfg.epsilon
    kind = cfg.sweep.kind
    if kind == "measurements":
        m = int(grid_value)
    elif kind == "separation":
        target = TWO_CLUSTER_SEP if cfg.sweep.two_cluster else UNIFORM_SEP
        spec = StructureSpec(target, separation=int(grid_value))
    elif kind == "sparsity":
        k = int(grid_value)
    elif kind == "epsilon":
        eps = float(grid_value)
    elif kind == "cluster_count":
        spec = StructureSpec.c_clusters(int(grid_value))
    return m, k, eps, spec


def _run_algorithm(algorithm: str, inst: ProblemInstance, k: int, cfg: ExperimentConfig):
    A, D, y = inst.A, inst.D, inst.y
    inner = cfg.solver_cfg
    if algorithm == "omp":
        res = solvers.omp(A.matrix @ D.matrix, y, k, inner)
    elif algorithm == "cosamp":
        res = solvers.cosamp(A.matrix @ D.matrix, y, k, inner)
    elif algorithm == "nomp":
        # the configured window is a cap: w = min(window, floor(m/k))
        w = min(cfg.nomp_window, A.m // k)
        res = solvers.nomp(A, D, y, k, w, inner)
    elif algorithm == "eps_omp":
        res = solvers.eps_omp(A, D, y, k, cfg.epsilon, inner)
    elif algorithm == "l1":
        res = solvers.l1_recover(A, D, y, k, inner)
    elif algorithm in _SS_PROJECTIONS:
        identify, prune = _SS_PROJECTIONS[algorithm]
        if ProjectionKind.L1 in (identify, prune):
            inner = replace(inner, **_L1_PROJECTION_ADMM)
        ss_cfg = SscosampConfig(identify_kind=identify, prune_kind=prune, inner_cfg=inner)
        res = sscosamp(A, D, y, k, ss_cfg)
    elif algorithm in ("usscosamp_alt", "usscosamp_union"):
        variant = UsscosampVariant.ALT if algorithm.endswith("alt") else UsscosampVariant.UNION
        res = usscosamp(A, D, y, k, variant, SscosampConfig(inner_cfg=inner))
    else:
        raise ValueError(f"unknown algorithm {algorithm!r}")
    xhat = res.x_hat if res.x_hat is not None else D.matrix @ res.alpha_hat
    return xhat


def run_trial(
    cfg: ExperimentConfig,
    algorithm: str,
    grid_value: float,
    trial_index: int,
    signal_index: int = 0,
) -> TrialRecord:
    """Execute one (algorithm, grid point, trial) cell.

    All algorithms see the same problem instance at a given (signal, grid,
    trial) triple; solver errors are recorded as failed trials rather than
    aborting the sweep.
    """
    grid_value = float(grid_value)
    grid_index = cfg.sweep.values.index(grid_value)
    base_spec = cfg.signals[signal_index]
    m, k, eps, spec = _materialize(cfg, base_spec, grid_value)
    if eps != cfg.epsilon:
        cfg = replace(cfg, epsilon=eps)

    rng = SeededRng(cfg.master_seed, (cfg.experiment_id, signal_index, grid_index, trial_index))
    D = _cached_dft(cfg.n, cfg.d // cfg.n)
    A = gaussian_measurement(m, cfg.n, rng.child(0))
    support = generate_support(spec, k, cfg.d, rng.child(1))
    alpha = draw_coefficients(support, COMPLEX_GAUSSIAN, cfg.d, rng.child(2))
    x = synthesize(D, alpha)
    y = measure(A, x, np.zeros(m))
    inst = ProblemInstance(A=A, D=D, alpha=alpha, x=x, y=y, noise=np.zeros(m))

    start = time.perf_counter()
    try:
        xhat = _run_algorithm(algorithm, inst, k, cfg)
        snr = snr_db(x, xhat)
    except ValueError:
        snr = float("-inf")
    runtime_ms = (time.perf_counter() - start) * 1e3

    return TrialRecord(
        algorithm=algorithm,
        signal_class=base_spec.label(),
        grid_value=grid_value,
        trial_index=trial_index,
        snr_db=snr,
        perfect=snr > PERFECT_RECOVERY_DB,
        runtime_ms=runtime_ms,
    )


def _run_cell(args) -> list[TrialRecord]:
    cfg, algorithm, signal_index, grid_value = args
    return [
        run_trial(cfg, algorithm, grid_value, trial, signal_index=signal_index)
        for trial in range(cfg.trials)
    ]


def run_experiment(cfg: ExperimentConfig, parallelism: int = 1) -> ResultTable:
    """Run the full algorithm x signal x grid x trial product.

    The result table is identical for any parallelism level; only wall-clock
    runtime differs.
    """
    if parallelism < 1:
        raise ValueError("parallelism must be >= 1")
    # deterministic row order: algorithm identifier, then signal, then grid
    cells = [
        (cfg, algorithm, signal_index, grid_value)
        for algorithm in sorted(cfg.algorithms)
        for signal_index in range(len(cfg.signals))
        for grid_value in cfg.sweep.values
    ]
    if parallelism == 1:
        cell_records = [_run_cell(cell) for cell in cells]
    else:
        with concurrent.futures.ProcessPoolExecutor(max_workers=parallelism) as pool:
            cell_records = list(pool.map(_run_cell, cells, chunksize=1))

    rows = []
    for (_, algorithm, signal_index, grid_value), records in zip(cells, cell_records):
        snrs = np.array([rec.snr_db for rec in records])
        _, k, _, _ = _materialize(cfg, cfg.signals[signal_index], grid_value)
        rows.append(
            ResultRow(
                algorithm=algorithm,
                signal_class=cfg.signals[signal_index].label(),
                grid_param=cfg.sweep.grid_param,
                grid_value=grid_value,
                n=cfg.n,
                d=cfg.d,
                k=k,
                trials=cfg.trials,
                perfect_pct=100.0 * sum(rec.perfect for rec in records) / len(records),
                mean_snr_db=float(np.mean(snrs)),
                mean_runtime_ms=float(np.mean([rec.runtime_ms for rec in records])),
            )
        )
    return ResultTable(config=cfg, rows=tuple(rows))


def _fmt(value) -> str:
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return f"{float(value):.6g}"


def emit_csv(table: ResultTable, destination) -> None:
    """Write the result table as CSV (LF endings, 6 significant digits)."""
    cfg = table.config
    lines = [CSV_HEADER]
    for row in table.rows:
        lines.append(
            ",".join(
                (
                    cfg.name,
                    row.algorithm,
                    row.signal_class,
                    _fmt(row.n),
                    _fmt(row.d),
                    _fmt(row.k),
                    row.grid_param,
                    _fmt(row.grid_value),
                    _fmt(row.trials),
                    _fmt(row.perfect_pct),
                    _fmt(row.mean_snr_db),
                    _fmt(row.mean_runtime_ms),
                    _fmt(cfg.master_seed),
                )
            )
        )
    destination.write("\n".join(lines) + "\n")


_PALETTE = (
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
    "#e377c2", "#17becf", "#bcbd22", "#7f7f7f", "#003f5c", "#ffa600",
)

_PLOT = {"left": 62.0, "top": 20.0, "width": 400.0, "height": 330.0}


def _plot_x(value: float, lo: float, hi: float) -> float:
    if hi == lo:
        return _PLOT["left"] + _PLOT["width"] / 2.0
    return _PLOT["left"] + (value - lo) / (hi - lo) * _PLOT["width"]


def _plot_y(pct: float) -> float:
    return _PLOT["top"] + (100.0 - pct) / 100.0 * _PLOT["height"]


def emit_svg(table: ResultTable, destination) -> None:
    """Render recovery percentage vs. grid value, one polyline per series."""
    if not table.rows:
        raise ValueError("cannot plot an empty result table")
    series: dict[tuple[str, str], list[ResultRow]] = {}
    for row in table.rows:
        series.setdefault((row.algorithm, row.signal_class), []).append(row)
    values = sorted({row.grid_value for row in table.rows})
    lo, hi = values[0], values[-1]
    many_signals = len({key[1] for key in series}) > 1

    left, top = _PLOT["left"], _PLOT["top"]
    width, height = _PLOT["width"], _PLOT["height"]
    bottom = top + height

    svg = ET.Element(
        "svg",
        xmlns="http://www.w3.org/2000/svg",
        width="720",
        height="420",
        viewBox="0 0 720 420",
    )
    ET.SubElement(svg, "rect", x="0", y="0", width="720", height="420", fill="white")
    axes = ET.SubElement(svg, "g", stroke="black", fill="none")
    ET.SubElement(
        axes,
        "path",
        d=f"M {left} {top} L {left} {bottom} L {left + width} {bottom}",
        attrib={"stroke-width": "1"},
    )
    labels = ET.SubElement(svg, "g", attrib={"font-family": "sans-serif", "font-size": "11"})
    for pct in (0, 25, 50, 75, 100):
        y = _plot_y(pct)
        ET.SubElement(axes, "path", d=f"M {left - 4} {y} L {left} {y}")
        tick = ET.SubElement(labels, "text", x=str(left - 8), y=f"{y + 4:.2f}")
        tick.set("text-anchor", "end")
        tick.text = str(pct)
    x_ticks = values if len(values) <= 12 else values[:: max(1, len(values) // 10)]
    for value in x_ticks:
        x = _plot_x(value, lo, hi)
        ET.SubElement(axes, "path", d=f"M {x:.2f} {bottom} L {x:.2f} {bottom + 4}")
        tick = ET.SubElement(labels, "text", x=f"{x:.2f}", y=f"{bottom + 16:.2f}")
        tick.set("text-anchor", "middle")
        tick.text = _fmt(value)
    xlabel = ET.SubElement(labels, "text", x=f"{left + width / 2:.2f}", y=f"{bottom + 34:.2f}")
    xlabel.set("text-anchor", "middle")
    xlabel.text = table.config.sweep.grid_param
    ylabel = ET.SubElement(labels, "text", x="16", y=f"{top + height / 2:.2f}")
    ylabel.set("transform", f"rotate(-90 16 {top + height / 2:.2f})")
    ylabel.set("text-anchor", "middle")
    ylabel.text = "perfect recovery (%)"

    for index, ((algorithm, signal), rows) in enumerate(series.items()):
        color = _PALETTE[index % len(_PALETTE)]
        rows = sorted(rows, key=lambda row: row.grid_value)
        points = " ".join(
            f"{_plot_x(row.grid_value, lo, hi):.2f},{_plot_y(row.perfect_pct):.2f}"
            for row in rows
        )
        ET.SubElement(
            svg,
            "polyline",
            points=points,
            fill="none",
            stroke=color,
            attrib={"stroke-width": "1.5"},
        )
        legend_y = top + 14 * index
        ET.SubElement(
            svg,
            "line",
            x1=f"{left + width + 14}",
            y1=f"{legend_y + 4:.2f}",
            x2=f"{left + width + 34}",
            y2=f"{legend_y + 4:.2f}",
            stroke=color,
            attrib={"stroke-width": "1.5"},
        )
        entry = ET.SubElement(
            labels, "text", x=f"{left + width + 38}", y=f"{legend_y + 8:.2f}"
        )
        entry.text = f"{algorithm}/{signal}" if many_signals else algorithm
    destination.write(ET.tostring(svg, encoding="unicode", xml_declaration=True))
    destination.write("\n")


def _mgrid(start: int, stop: int, step: int) -> tuple[float, ...]:
    return tuple(float(v) for v in range(start, stop + 1, step))


_CONVENTIONAL = ("sscosamp_cosamp", "sscosamp_l1", "sscosamp_omp", "cosamp", "omp", "l1")
_USS_BENCH = ("usscosamp_alt", "usscosamp_union", "sscosamp_omp", "sscosamp_cosamp")
_NOMP_BENCH = ("nomp", "eps_omp", "omp", "cosamp", "l1", "sscosamp_omp", "sscosamp_cosamp")

_TABLE1_SIGNALS = (
    StructureSpec.clustered(),
    StructureSpec.spread(),
    StructureSpec.hybrid(),
    StructureSpec.c_clusters(2),
    StructureSpec.c_clusters(4),
    StructureSpec.alternating(),
    StructureSpec.pair_spread(),
)


def _preset_builders():
    measurements5 = Sweep("measurements", _mgrid(20, 100, 5))
    measurements8 = Sweep("measurements", _mgrid(20, 100, 8))
    separation = Sweep("separation", _mgrid(0, 10, 1))
    return {
        "fig1_clustered": lambda: ExperimentConfig(
            name="fig1_clustered",
            algorithms=("sscosamp_cosamp", "sscosamp_l1", "sscosamp_omp"),
            signals=(StructureSpec.clustered(),),
            sweep=measurements5,
            trials=100,
        ),
        "fig1_spread": lambda: ExperimentConfig(
            name="fig1_spread",
            algorithms=("sscosamp_cosamp", "sscosamp_l1", "sscosamp_omp"),
            signals=(StructureSpec.spread(),),
            sweep=measurements5,
            trials=100,
        ),
        "fig_hybrid": lambda: ExperimentConfig(
            name="fig_hybrid",
            algorithms=_CONVENTIONAL,
            signals=(StructureSpec.hybrid(),),
            sweep=measurements5,
            trials=100,
        ),
        "fig3_uniform_sep": lambda: ExperimentConfig(
            name="fig3_uniform_sep",
            algorithms=_CONVENTIONAL,
            signals=(StructureSpec.uniform_sep(),),
            sweep=separation,
            trials=100,
        ),
        "fig3_two_cluster": lambda: ExperimentConfig(
            name="fig3_two_cluster",
            algorithms=_CONVENTIONAL,
            signals=(StructureSpec.two_cluster_sep(),),
            sweep=replace(separation, two_cluster=True),
            trials=100,
        ),
        "fig4_prune_vs_id": lambda: ExperimentConfig(
            name="fig4_prune_vs_id",
            algorithms=(
                "sscosamp_omp_id_cosamp_prune",
                "sscosamp_cosamp_id_omp_prune",
                "sscosamp_cosamp",
                "sscosamp_omp",
            ),
            signals=(StructureSpec.clustered(), StructureSpec.spread()),
            sweep=measurements5,
            trials=100,
        ),
        "fig5_nomp": lambda: ExperimentConfig(
            name="fig5_nomp",
            algorithms=_NOMP_BENCH,
            signals=(StructureSpec.clustered(), StructureSpec.spread(), StructureSpec.hybrid()),
            sweep=measurements8,
            trials=40,
        ),
        "fig6_eps_sweep": lambda: ExperimentConfig(
            name="fig6_eps_sweep",
            algorithms=("nomp", "eps_omp"),
            signals=(StructureSpec.hybrid(),),
            sweep=Sweep("epsilon", (0.80, 0.85, 0.90, 0.9539, 0.98)),
            trials=40,
        ),
        "fig_numclus": lambda: ExperimentConfig(
            name="fig_numclus",
            algorithms=_NOMP_BENCH,
            signals=(StructureSpec(C_CLUSTERS),),
            sweep=Sweep("cluster_count", (1.0, 2.0, 4.0)),
            trials=40,
        ),
        "fig_nomp_sparsity": lambda: ExperimentConfig(
            name="fig_nomp_sparsity",
            algorithms=("nomp",),
            signals=(StructureSpec.clustered(),),
            sweep=Sweep("sparsity", (8.0, 16.0, 24.0, 32.0)),
            trials=40,
        ),
        "fig_uss_clustered": lambda: ExperimentConfig(
            name="fig_uss_clustered",
            algorithms=_USS_BENCH,
            signals=(StructureSpec.clustered(),),
            sweep=measurements5,
            trials=100,
        ),
        "fig_uss_spread": lambda: ExperimentConfig(
            name="fig_uss_spread",
            algorithms=_USS_BENCH,
            signals=(StructureSpec.spread(),),
            sweep=measurements5,
            trials=100,
        ),
        "fig_uss_hybrid": lambda: ExperimentConfig(
            name="fig_uss_hybrid",
            algorithms=_USS_BENCH,
            signals=(StructureSpec.hybrid(),),
            sweep=measurements5,
            trials=500,
        ),
        "table1": lambda: ExperimentConfig(
            name="table1",
            algorithms=(
                "sscosamp_cosamp",
                "sscosamp_l1",
                "sscosamp_omp",
                "cosamp",
                "omp",
                "l1",
                "usscosamp_alt",
                "nomp",
            ),
            signals=_TABLE1_SIGNALS,
            sweep=Sweep("measurements", (100.0,)),
            trials=40,
        ),
    }


PRESET_NAMES = tuple(_preset_builders())


def preset(name: str) -> ExperimentConfig:
    """The paper-matched experiment configuration for ``name``."""
    builders = _preset_builders()
    if name not in builders:
        raise KeyError(f"unknown preset {name!r}; valid presets: {', '.join(PRESET_NAMES)}")
    return builders[name]()
