"""Command-line driver for the bound solvers.

Subcommands sweep the named state families (werner, isotropic, tiles),
random entangled states, user-supplied matrices (bound), and the 2x3
pure-state walkthrough (demo-pure).  Results go to stdout as a summary
table, optionally to CSV (--out) and a JSON report (--json).

Exit codes: 0 on success, 2 on invalid input, 3 when a requested solver
failed to converge on some record (outputs are still written).
"""

import argparse
import csv
import hashlib
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, fields

import numpy as np

from . import __version__
from .analytic import AnalyticValue, isotropic_er, pure_state_er, werner_er
from .cha import ActiveLearningConfig, upper_bound
from .ppt import ppt_relative_entropy
from .states import (
    DensityMatrix,
    as_density_matrix,
    isotropic,
    random_entangled,
    tiles_family,
    werner,
)

THREADS_ENV = "REEBOUND_THREADS"

CSV_COLUMNS = [
    "experiment",
    "state",
    "dim_a",
    "dim_b",
    "alpha",
    "seed",
    "analytic_bits",
    "cha_bits",
    "cha_converged",
    "ppt_bits",
    "ppt_converged",
    "gap_bits",
    "config_hash",
    "version",
]


@dataclass
class ExperimentRecord:
    """One solved state: identifying data, bound values, and diagnostics.

    Wall-clock fields are excluded from CSV output so that identical seeds
    give identical bytes; the JSON report carries them.
    """

    experiment: str
    state: str
    dim_a: int
    dim_b: int
    alpha: float = None
    seed: int = None
    analytic_bits: float = None
    cha_bits: float = None
    cha_converged: bool = None
    cha_seconds: float = None
    ppt_bits: float = None
    ppt_converged: bool = None
    ppt_seconds: float = None

    @property
    def gap_bits(self):
        if self.cha_bits is None or self.ppt_bits is None:
            return None
        return self.cha_bits - self.ppt_bits


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return repr(value)
    return str(value)


def config_hash(cfg: ActiveLearningConfig) -> str:
    """Short stable digest of the solver configuration."""
    canon = json.dumps(asdict(cfg), sort_keys=True)
    return hashlib.sha256(canon.encode()).hexdigest()[:12]


def _solve_record(record, rho, method, cfg, cha_seed):
    if method in ("cha", "both"):
        t0 = time.perf_counter()
        report = upper_bound(rho, cfg, seed=cha_seed)
        record.cha_seconds = time.perf_counter() - t0
        record.cha_bits = report.best_value_bits
        record.cha_converged = report.best_solution.converged
    if method in ("ppt", "both"):
        t0 = time.perf_counter()
        sol = ppt_relative_entropy(rho)
        record.ppt_seconds = time.perf_counter() - t0
        record.ppt_bits = sol.value_bits
        record.ppt_converged = sol.converged
    return record


def _run_all(tasks, threads):
    if threads > 1 and len(tasks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(lambda t: t(), tasks))
    return [t() for t in tasks]


def _write_csv(path, records, cfg):
    digest = config_hash(cfg)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for r in records:
            row = {
                **{f.name: getattr(r, f.name) for f in fields(r)},
                "gap_bits": r.gap_bits,
                "config_hash": digest,
                "version": __version__,
            }
            writer.writerow([_fmt(row[c]) for c in CSV_COLUMNS])


def _write_json(path, records, cfg, base_seed):
    payload = {
        "version": __version__,
        "seed": base_seed,
        "config": asdict(cfg),
        "config_hash": config_hash(cfg),
        "records": [
            {**asdict(r), "gap_bits": r.gap_bits} for r in records
        ],
    }
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _print_summary(records, out=None):
    out = out if out is not None else sys.stdout
    header = f"{'state':<40} {'analytic':>10} {'cha':>10} {'ppt':>10} {'gap':>10}"
    print(header, file=out)
    print("-" * len(header), file=out)
    for r in records:
        def cell(x):
            return f"{x:10.6f}" if x is not None else " " * 10
        print(
            f"{r.state:<40} {cell(r.analytic_bits)} {cell(r.cha_bits)} "
            f"{cell(r.ppt_bits)} {cell(r.gap_bits)}",
            file=out,
        )


def _load_config_file(path) -> dict:
    """Flat key = value pairs mirroring ActiveLearningConfig field names."""
    valid = {f.name: f.type for f in fields(ActiveLearningConfig)}
    out = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected 'key = value'")
            key, _, value = line.partition("=")
            key = key.strip()
            if key not in valid:
                raise ValueError(f"{path}:{lineno}: unknown config key '{key}'")
            caster = int if valid[key] in (int, "int") else float
            out[key] = caster(value.strip())
    return out


def _effective_config(args) -> ActiveLearningConfig:
    values = {}
    if args.config:
        values.update(_load_config_file(args.config))
    overrides = {
        "pool_size": args.pool_size,
        "outer_iterations": args.iterations,
        "weight_threshold": args.epsilon,
        "delta0": args.delta0,
    }
    values.update({k: v for k, v in overrides.items() if v is not None})
    return ActiveLearningConfig(**values)


def _alpha_values(args) -> list:
    if args.alpha_grid is not None:
        parts = args.alpha_grid.split(":")
        if len(parts) != 3:
            raise ValueError("--alpha-grid must look like start:stop:step")
        start, stop, step = (float(p) for p in parts)
        if step <= 0:
            raise ValueError("--alpha-grid step must be positive")
        count = int(np.floor((stop - start) / step + 1e-9)) + 1
        if count < 1:
            raise ValueError("--alpha-grid is empty")
        return [round(start + i * step, 12) for i in range(count)]
    if args.alpha is not None:
        return [args.alpha]
    raise ValueError("either --alpha or --alpha-grid is required")


def _derived_seeds(base_seed, n):
    return np.random.SeedSequence(base_seed).generate_state(2 * n, dtype=np.uint64)


def _family_tasks(args, cfg):
    alphas = _alpha_values(args)
    seeds = _derived_seeds(args.seed, len(alphas))
    maker = {
        "werner": lambda a: (werner(args.d, a), werner_er(args.d, a)),
        "isotropic": lambda a: (isotropic(args.d, a), isotropic_er(args.d, a)),
        "tiles": lambda a: (tiles_family(a), None),
    }[args.command]
    tasks = []
    for i, alpha in enumerate(alphas):
        rho, analytic = maker(alpha)
        label = (
            f"{args.command}(alpha={alpha:g})"
            if args.command == "tiles"
            else f"{args.command}(d={args.d},alpha={alpha:g})"
        )
        record = ExperimentRecord(
            experiment=args.command,
            state=label,
            dim_a=rho.dim_a,
            dim_b=rho.dim_b,
            alpha=alpha,
            seed=int(seeds[2 * i + 1]),
            analytic_bits=analytic.value_bits if analytic else None,
        )
        tasks.append(
            lambda r=record, rho=rho, s=int(seeds[2 * i + 1]): _solve_record(
                r, rho, args.method, cfg, s
            )
        )
    return tasks


def _random_tasks(args, cfg):
    seeds = _derived_seeds(args.seed, args.count)
    tasks = []
    for i in range(args.count):
        state_seed = int(seeds[2 * i])
        cha_seed = int(seeds[2 * i + 1])
        rho = random_entangled(args.da, args.db, seed=state_seed)
        record = ExperimentRecord(
            experiment="random",
            state=f"random({args.da}x{args.db},seed={state_seed})",
            dim_a=args.da,
            dim_b=args.db,
            seed=cha_seed,
        )
        tasks.append(
            lambda r=record, rho=rho, s=cha_seed: _solve_record(
                r, rho, args.method, cfg, s
            )
        )
    return tasks


def _load_state_file(path) -> DensityMatrix:
    with open(path) as fh:
        payload = json.load(fh)
    for key in ("dim_a", "dim_b", "matrix"):
        if key not in payload:
            raise ValueError(f"state file is missing '{key}'")
    dim_a, dim_b = int(payload["dim_a"]), int(payload["dim_b"])
    d = dim_a * dim_b
    entries = np.asarray(payload["matrix"], dtype=float)
    if entries.shape == (d * d, 2):
        entries = entries.reshape(d, d, 2)
    if entries.shape != (d, d, 2):
        raise ValueError(
            f"matrix must hold {d * d} row-major [re, im] pairs for dims "
            f"({dim_a}, {dim_b}), got shape {entries.shape}"
        )
    mat = entries[..., 0] + 1j * entries[..., 1]
    return as_density_matrix(mat, dims=(dim_a, dim_b))


def _bound_tasks(args, cfg):
    rho = _load_state_file(args.input)
    with open(args.input, "rb") as fh:
        digest = hashlib.sha256(fh.read()).hexdigest()[:12]
    seeds = _derived_seeds(args.seed, 1)
    record = ExperimentRecord(
        experiment="bound",
        state=f"file:{digest}",
        dim_a=rho.dim_a,
        dim_b=rho.dim_b,
        seed=int(seeds[1]),
    )
    return [
        lambda r=record, rho=rho, s=int(seeds[1]): _solve_record(
            r, rho, args.method, cfg, s
        )
    ]


def _demo_tasks(args, cfg):
    psi = np.zeros(6, dtype=complex)
    psi[0] = psi[4] = psi[5] = 1 / np.sqrt(3)
    rho = DensityMatrix(2, 3, np.outer(psi, psi.conj()))
    analytic = pure_state_er(psi, 2, 3)
    seeds = _derived_seeds(args.seed, 1)
    record = ExperimentRecord(
        experiment="demo-pure",
        state="pure((|00>+|11>+|12>)/sqrt3)",
        dim_a=2,
        dim_b=3,
        seed=int(seeds[1]),
        analytic_bits=analytic.value_bits,
    )

    def run(r=record, rho=rho, s=int(seeds[1])):
        t0 = time.perf_counter()
        report = upper_bound(rho, cfg, seed=s)
        r.cha_seconds = time.perf_counter() - t0
        r.cha_bits = report.best_value_bits
        r.cha_converged = report.best_solution.converged
        print("round  value_bits      fw_gap_nats  delta    useful perturbed fresh")
        for h in report.history:
            print(
                f"{h.index:>5}  {h.value_bits:<14.10f}  {h.fw_gap_nats:<11.3e}"
                f"  {h.delta:<7.4f}  {h.n_useful:>5} {h.n_perturbed:>9} {h.n_fresh:>5}"
            )
        print(
            f"best value {report.best_value_bits:.6f} bits at round "
            f"{report.best_iteration}; analytic {r.analytic_bits:.6f} bits"
        )
        if args.method in ("ppt", "both"):
            t0 = time.perf_counter()
            sol = ppt_relative_entropy(rho)
            r.ppt_seconds = time.perf_counter() - t0
            r.ppt_bits = sol.value_bits
            r.ppt_converged = sol.converged
            print(f"ppt benchmark {sol.value_bits:.6f} bits")
        return r

    return [run]


def _add_common(parser):
    parser.add_argument("--seed", type=int, default=0, help="master seed")
    parser.add_argument("--pool-size", type=int, default=None, help="candidate pool size")
    parser.add_argument("--iterations", type=int, default=None, help="outer rounds")
    parser.add_argument(
        "--epsilon", type=float, default=None, help="useful-vertex weight threshold"
    )
    parser.add_argument(
        "--delta0", type=float, default=None, help="initial perturbation strength"
    )
    parser.add_argument(
        "--method",
        choices=("cha", "ppt", "both"),
        default="both",
        help="which solvers to run",
    )
    parser.add_argument("--out", default=None, help="write records to this CSV file")
    parser.add_argument("--json", default=None, help="write a JSON report here")
    parser.add_argument(
        "--threads",
        type=int,
        default=None,
        help=f"worker threads across records (default: {THREADS_ENV} or cpu count)",
    )
    parser.add_argument(
        "--config", default=None, help="flat key=value solver config file"
    )


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="reebound",
        description="Upper bounds on the relative entropy of entanglement.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    for name, blurb in (
        ("werner", "Werner family, closed form included"),
        ("isotropic", "isotropic family, closed form included"),
    ):
        p = sub.add_parser(name, help=blurb)
        p.add_argument("--d", type=int, default=2, help="local dimension")
        p.add_argument("--alpha", type=float, default=None)
        p.add_argument("--alpha-grid", default=None, help="start:stop:step")
        _add_common(p)

    p = sub.add_parser("tiles", help="tiles family on 3x3")
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--alpha-grid", default=None, help="start:stop:step")
    _add_common(p)

    p = sub.add_parser("random", help="random NPT states")
    p.add_argument("--da", type=int, default=2)
    p.add_argument("--db", type=int, default=2)
    p.add_argument("--count", type=int, default=1)
    _add_common(p)

    p = sub.add_parser("bound", help="bound a state from a JSON matrix file")
    p.add_argument("--input", required=True, help="JSON state file")
    _add_common(p)

    p = sub.add_parser("demo-pure", help="walk through the 2x3 pure-state demo")
    _add_common(p)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)

    threads = args.threads
    if threads is None:
        raw = os.environ.get(THREADS_ENV, "")
        try:
            threads = int(raw) if raw else 0
        except ValueError:
            print(f"error: {THREADS_ENV}={raw!r} is not an integer", file=sys.stderr)
            return 2
        threads = threads or os.cpu_count() or 1
    if threads < 1:
        print(f"error: --threads must be positive, got {threads}", file=sys.stderr)
        return 2

    try:
        cfg = _effective_config(args)
        builder = {
            "werner": _family_tasks,
            "isotropic": _family_tasks,
            "tiles": _family_tasks,
            "random": _random_tasks,
            "bound": _bound_tasks,
            "demo-pure": _demo_tasks,
        }[args.command]
        tasks = builder(args, cfg)
    except (ValueError, RuntimeError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    records = _run_all(tasks, threads)

    if args.command != "demo-pure":
        _print_summary(records)
    if args.out:
        _write_csv(args.out, records, cfg)
    if args.json:
        _write_json(args.json, records, cfg, args.seed)

    bad = [
        r.state
        for r in records
        if (r.cha_converged is False) or (r.ppt_converged is False)
    ]
    if bad:
        print(
            f"warning: solver did not converge on {len(bad)} record(s): "
            + ", ".join(bad[:5]),
            file=sys.stderr,
        )
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
