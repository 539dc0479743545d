"""Sweeps over random dense instances recording k*, solver, timing and component outcome."""

from __future__ import annotations

import csv
import io
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from fractions import Fraction

from .errors import InternalContradiction, MinDegreeTooLow
from .exact_partition import DEFAULT_CAP, Unsat, min_mono_cycle_partition, verify_certificate
from .generators import gen_random_min_degree
from .heuristic import HeuristicFailure, heuristic_partition
from .structure import ComponentSelection, find_components

COLUMNS = ("instance_id", "n", "seed", "delta", "k_star", "solver", "millis", "components_outcome")


@dataclass(frozen=True)
class SurveyConfig:
    n_min: int
    n_max: int
    samples: int
    delta: Fraction
    gamma: Fraction = Fraction(1, 48)
    seed: int = 0
    solver: str = "auto"  # exact | heuristic | both | auto
    colour_bias: float = 0.5
    heuristic_parts: int = 3
    exact_cap: int = DEFAULT_CAP
    timing: bool = False


@dataclass(frozen=True)
class SurveyRow:
    instance_id: int
    n: int
    seed: int
    delta: str
    k_star: str
    solver: str
    millis: str
    components_outcome: str


def instance_plan(cfg: SurveyConfig) -> list[tuple[int, int, int]]:
    """(instance_id, n, seed) triples; per-instance seeds come from one master RNG."""
    rng = random.Random(cfg.seed)
    plan = []
    iid = 0
    for n in range(cfg.n_min, cfg.n_max + 1):
        for _ in range(cfg.samples):
            plan.append((iid, n, rng.randrange(2**31)))
            iid += 1
    return plan


def components_outcome(g, gamma) -> str:
    try:
        out = find_components(g, gamma, strict=True)
        prefix = ""
    except MinDegreeTooLow:
        prefix = "below_threshold:"
        try:
            out = find_components(g, gamma, strict=False)
        except InternalContradiction:
            return prefix + "internal_contradiction"
    except InternalContradiction:
        return "internal_contradiction"
    if isinstance(out, ComponentSelection):
        return prefix + out.case
    return prefix + out.kind


def _millis(t0: float, cfg: SurveyConfig) -> str:
    return str(round((time.perf_counter() - t0) * 1000)) if cfg.timing else ""


def run_instance(args) -> list[SurveyRow]:
    cfg, (iid, n, seed) = args
    g = gen_random_min_degree(n, cfg.delta, cfg.colour_bias, seed)
    outcome = components_outcome(g, cfg.gamma)
    solvers = {"both": ["exact", "heuristic"], "auto": ["exact" if n <= cfg.exact_cap else "heuristic"]}.get(
        cfg.solver, [cfg.solver]
    )
    rows = []
    for name in solvers:
        t0 = time.perf_counter()
        if name == "exact":
            res = min_mono_cycle_partition(g, n, cap=cfg.exact_cap)
            k_star = "" if isinstance(res, Unsat) else str(res[0])
        elif name == "heuristic":
            res = heuristic_partition(g, cfg.gamma, max_parts=cfg.heuristic_parts)
            if isinstance(res, HeuristicFailure):
                k_star = f"failed:{res.stage}"
            else:
                if verify_certificate(g, res) is not None:
                    raise AssertionError(f"heuristic emitted an invalid certificate on instance {iid}")
                k_star = str(res.k)
        else:
            raise ValueError(f"unknown solver {name!r}")
        rows.append(SurveyRow(iid, n, seed, str(cfg.delta), k_star, name, _millis(t0, cfg), outcome))
    return rows


def run_survey(cfg: SurveyConfig, workers: int = 1) -> list[SurveyRow]:
    jobs = [(cfg, item) for item in instance_plan(cfg)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run_instance, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    else:
        results = [run_instance(j) for j in jobs]
    return [row for rows in results for row in rows]


def rows_to_csv(rows: list[SurveyRow]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=COLUMNS, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow(asdict(r))
    return buf.getvalue()


def rows_to_json(rows: list[SurveyRow]) -> list[dict]:
    return [asdict(r) for r in rows]
