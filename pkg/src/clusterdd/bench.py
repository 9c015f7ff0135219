"""Brute-force oracle, experiment sweeps and CSV reporting."""
from __future__ import annotations

import csv
import io
import statistics
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, TextIO

from .bnb import solve
from .errors import ContractViolation
from .graph import WeightedGraph, generate_instance, parse_graph, serialize_graph
from .strategies import StrategyConfig

BRUTE_FORCE_LIMIT = 30

CSV_HEADER = (
    "density", "instance", "strategy", "policy", "width", "optimum",
    "wall_time_s", "nodes", "cand_evals", "relaxed_dds",
)
SUMMARY_INSTANCE = "mean"

ALL_CONFIGS = (
    ("baseline", "fixed"),
    ("cbc", "fixed"), ("cbc", "adaptive"),
    ("pas-vo", "fixed"), ("pas-vo", "adaptive"),
    ("pas", "fixed"), ("pas", "adaptive"),
)


def brute_force(g: WeightedGraph) -> int:
    """Maximum independent set weight by enumerating independent sets."""
    if g.n > BRUTE_FORCE_LIMIT:
        raise ContractViolation(f"brute force refused for n={g.n} > {BRUTE_FORCE_LIMIT}")
    w, closed, adj = g.weights, g.closed, g.adj

    def best(avail: int) -> int:
        if not avail:
            return 0
        v = (avail & -avail).bit_length() - 1
        if not adj[v] & avail:
            # isolated in what is left: taking it never hurts
            return w[v] + best(avail & ~(1 << v))
        return max(best(avail & ~(1 << v)), w[v] + best(avail & ~closed[v]))

    return best(g.full_mask)


@dataclass
class ExperimentRow:
    density: float
    instance: str
    strategy: str
    policy: str
    width: int
    optimum: int | None
    wall_time_s: float
    nodes: float
    cand_evals: float
    relaxed_dds: float

    def to_record(self) -> list[str]:
        def num(x):
            if x is None:
                return ""
            if isinstance(x, float) and not x.is_integer():
                return f"{x:.6f}".rstrip("0")
            return str(int(x)) if isinstance(x, float) else str(x)

        return [
            f"{self.density:g}", self.instance, self.strategy, self.policy,
            str(self.width), num(self.optimum), f"{self.wall_time_s:.6f}",
            num(self.nodes), num(self.cand_evals), num(self.relaxed_dds),
        ]

    @classmethod
    def from_record(cls, rec: list[str]) -> ExperimentRow:
        def num(s):
            if s == "":
                return None
            f = float(s)
            return int(f) if f.is_integer() and "." not in s else f

        d = dict(zip(CSV_HEADER, rec))
        return cls(
            density=float(d["density"]), instance=d["instance"], strategy=d["strategy"],
            policy=d["policy"], width=int(d["width"]), optimum=num(d["optimum"]),
            wall_time_s=float(d["wall_time_s"]), nodes=num(d["nodes"]),
            cand_evals=num(d["cand_evals"]), relaxed_dds=num(d["relaxed_dds"]),
        )


def write_rows(rows: Iterable[ExperimentRow], out: TextIO, header: bool = True) -> None:
    w = csv.writer(out, lineterminator="\n")
    if header:
        w.writerow(CSV_HEADER)
    for r in rows:
        w.writerow(r.to_record())


def read_rows(text: str | TextIO) -> list[ExperimentRow]:
    stream = io.StringIO(text) if isinstance(text, str) else text
    reader = csv.reader(stream)
    head = next(reader)
    if tuple(head) != CSV_HEADER:
        raise ValueError(f"unexpected CSV header {head}")
    return [ExperimentRow.from_record(r) for r in reader]


def parse_configs(spec: str, W: int, seed: int = 0) -> list[StrategyConfig]:
    """``"all"`` or a comma list such as ``baseline,cbc:adaptive,pas-vo:fixed``."""
    if spec.strip() == "all":
        pairs = ALL_CONFIGS
    else:
        pairs = []
        for item in spec.split(","):
            name, _, policy = item.strip().partition(":")
            pairs.append((name, policy or "fixed"))
    return [StrategyConfig(s, p, W, seed) for s, p in pairs]


def instance_seed(density: float, idx: int, base_seed: int = 0) -> int:
    return base_seed * 1_000_003 + round(density * 1000) * 1000 + idx


def load_or_generate(n: int, density: float, idx: int, base_seed: int, cache: Path | None):
    name = f"n{n}_d{density:g}_i{idx}"
    if cache is None:
        return name, generate_instance(n, density, instance_seed(density, idx, base_seed))
    path = cache / f"{name}_s{base_seed}.txt"
    try:
        if path.exists():
            return name, parse_graph(path.read_text())
        g = generate_instance(n, density, instance_seed(density, idx, base_seed))
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(serialize_graph(g, comment=f"G(n={n}, p={density:g}) seed={base_seed} idx={idx}"))
    except OSError as exc:
        raise OSError(f"{path}: {exc.strerror or exc}") from exc
    return name, g


def _label_policy(cfg: StrategyConfig) -> str:
    return "-" if cfg.strategy == "baseline" else cfg.policy


def run_sweep(
    densities: Iterable[float],
    n: int,
    instances_per_density: int,
    configs: list[StrategyConfig],
    out: TextIO | None = None,
    *,
    base_seed: int = 0,
    cache: Path | None = None,
    instance_files: dict[float, list[Path]] | None = None,
) -> Iterator[ExperimentRow]:
    """Solve every instance under every config; yield data rows then per-density means.

    With ``instance_files`` the graphs for a density are read from disk
    instead of generated.
    """
    writer = None
    if out is not None:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(CSV_HEADER)

    def emit(row):
        if writer is not None:
            writer.writerow(row.to_record())
            out.flush()
        return row

    for density in densities:
        if instance_files is not None:
            graphs = []
            for p in instance_files.get(density, []):
                try:
                    graphs.append((Path(p).stem, parse_graph(Path(p).read_text())))
                except OSError as exc:
                    raise OSError(f"{p}: {exc.strerror or exc}") from exc
        else:
            graphs = [load_or_generate(n, density, i, base_seed, cache) for i in range(instances_per_density)]
        per_cfg: dict[int, list[ExperimentRow]] = {i: [] for i in range(len(configs))}
        for name, g in graphs:
            for ci, cfg in enumerate(configs):
                res = solve(g, cfg)
                row = ExperimentRow(
                    density, name, cfg.strategy, _label_policy(cfg), cfg.W, res.optimum,
                    round(res.wall_time, 6), res.nodes_processed, res.candidate_evaluations,
                    res.relaxed_compilations,
                )
                per_cfg[ci].append(row)
                yield emit(row)
        for ci, cfg in enumerate(configs):
            rows = per_cfg[ci]
            if not rows:
                continue
            yield emit(ExperimentRow(
                density, SUMMARY_INSTANCE, cfg.strategy, _label_policy(cfg), cfg.W, None,
                round(statistics.fmean(r.wall_time_s for r in rows), 6),
                round(statistics.fmean(r.nodes for r in rows), 3),
                round(statistics.fmean(r.cand_evals for r in rows), 3),
                round(statistics.fmean(r.relaxed_dds for r in rows), 3),
            ))


def summary_table(rows: Iterable[ExperimentRow]) -> str:
    """Density x config grid of mean wall times, laid out like a results table."""
    means = [r for r in rows if r.instance == SUMMARY_INSTANCE]
    cols: list[str] = []
    grid: dict[float, dict[str, ExperimentRow]] = {}
    for r in means:
        label = r.strategy if r.policy == "-" else f"{r.strategy}/{r.policy}"
        if label not in cols:
            cols.append(label)
        grid.setdefault(r.density, {})[label] = r
    width = max([14] + [len(c) + 2 for c in cols])
    lines = ["density".ljust(8) + "".join(c.rjust(width) for c in cols)]
    for d in sorted(grid, reverse=True):
        cells = []
        for c in cols:
            r = grid[d].get(c)
            cells.append((f"{r.wall_time_s:.3f}s/{r.cand_evals:.0f}" if r else "-").rjust(width))
        lines.append(f"{d:<8g}" + "".join(cells))
    lines.append("cells: mean wall time / mean candidate evaluations")
    return "\n".join(lines)

