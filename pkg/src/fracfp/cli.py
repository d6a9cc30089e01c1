"""Command line front end: config parsing, named experiments, CSV/JSON export.

Configuration files are JSON objects; every key is optional and defaults to
the Example-1 setup::

    {
      "alpha": 0.5, "gamma": 2.0, "N": 100, "T": 5.0,
      "domain": [-5.0, 15.0], "nx": 20480, "D": 1.0,
      "force":   {"kind": "zero", "params": {}},
      "initial": {"kind": "gaussian", "params": {"sigma": 0.1, "mu": 2.0}},
      "source":  {"kind": "zero", "params": {}},
      "variant": "riemann_liouville",
      "snapshot_times": [0.02, 0.045, 0.08, 0.125, 0.245, 0.5],
      "output_dir": "out"
    }

Force and source kinds: zero, sin_t_plus_x, sin_x_plus_t, affine_in_t
(params a, b), custom (params: coefficients of 1, x, t, sin_x, sin_t,
cos_x, cos_t).  Initial kinds: gaussian (sigma, mu), sine_mode
(wavenumber), nodal (values).

Exit codes: 0 success, 2 configuration error, 3 numerical failure,
4 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import sys
import warnings
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Any, Sequence


from .errors import ConfigError, ConvergenceError, SingularSystemError, StepError
from .meshing import GradedTimeMesh, SpaceGrid
from .models import (
    ForceField,
    ForceKind,
    InitialDatum,
    InitialKind,
    ProblemSpec,
    Variant,
    make_force,
)
from .stepper import RunReport, diagnostics, run
from .verify import (
    ErrorTable,
    GapRecord,
    convergence_study,
    model_gap_study,
    subdiffusion_reference,
)

log = logging.getLogger("fracfp")

FIGURE_TIMES = [0.02, 0.045, 0.08, 0.125, 0.245, 0.5]
EXPERIMENT_ALPHAS = [0.25, 0.5, 0.75, 1.0]
EXPERIMENT_NX = 2048
FULL_NX = 20480


@dataclass
class RunConfig:
    alpha: float = 0.5
    gamma: float = 2.0
    N: int = 100
    T: float = 5.0
    domain: tuple[float, float] = (-5.0, 15.0)
    nx: int = FULL_NX
    D: float = 1.0
    force: dict = field(default_factory=lambda: {"kind": "zero", "params": {}})
    initial: dict = field(
        default_factory=lambda: {"kind": "gaussian", "params": {"sigma": 0.1, "mu": 2.0}}
    )
    source: dict = field(default_factory=lambda: {"kind": "zero", "params": {}})
    variant: str = "riemann_liouville"
    snapshot_times: list[float] = field(default_factory=lambda: list(FIGURE_TIMES))
    output_dir: str = "out"

    def validate(self) -> RunConfig:
        if not 0.0 < self.alpha <= 1.0:
            raise ConfigError("alpha must lie in (0,1]")
        if not self.gamma >= 1.0:
            raise ConfigError("gamma must be >= 1")
        if self.N < 1:
            raise ConfigError("N must be a positive integer")
        if not self.T > 0:
            raise ConfigError("T must be positive")
        if not self.domain[0] < self.domain[1]:
            raise ConfigError("domain must be [a, b] with a < b")
        if self.nx < 2:
            raise ConfigError("nx must be >= 2")
        if not self.D > 0:
            raise ConfigError("D must be positive")
        if self.variant not in {v.value for v in Variant}:
            raise ConfigError(
                f"variant must be one of {[v.value for v in Variant]}, got {self.variant!r}"
            )
        if self.variant == Variant.CAPUTO_LEFT.value and self.alpha == 1.0:
            log.info("caputo_left at alpha = 1 is the classical equation")
        bad = [t for t in self.snapshot_times if not 0.0 <= t <= self.T]
        if bad:
            raise ConfigError(f"snapshot_times must lie in [0, T]; offending: {bad}")
        for key in ("force", "source"):
            try:
                self.field_of(key)
            except ValueError as exc:
                raise ConfigError(f"{key}: {exc}") from None
        try:
            InitialDatum(InitialKind(self.initial["kind"]), self.initial.get("params", {}))
        except (ValueError, KeyError) as exc:
            raise ConfigError(f"initial: {exc}") from None
        return self

    def field_of(self, key: str) -> ForceField:
        entry = getattr(self, key)
        return make_force(entry["kind"], entry.get("params", {}))

    def to_spec(self) -> ProblemSpec:
        init = InitialDatum(InitialKind(self.initial["kind"]), self.initial.get("params", {}))
        return ProblemSpec(
            alpha=self.alpha,
            D=self.D,
            grid=SpaceGrid(self.domain[0], self.domain[1], self.nx),
            tmesh=GradedTimeMesh(self.N, self.gamma, self.T),
            force=self.field_of("force"),
            initial=init,
            source=self.field_of("source"),
            variant=Variant(self.variant),
        )

    def to_dict(self) -> dict[str, Any]:
        d = asdict(self)
        d["domain"] = list(self.domain)
        return d


_FLOAT_KEYS = ("alpha", "gamma", "T", "D")
_INT_KEYS = ("N", "nx")


def _coerce(key: str, value, kind):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"key {key!r}: expected a number, got {value!r}")
    if kind is int:
        if float(value) != int(value):
            raise ConfigError(f"key {key!r}: expected an integer, got {value!r}")
        return int(value)
    if not math.isfinite(value):
        raise ConfigError(f"key {key!r}: value must be finite")
    return float(value)


def _field_entry(key: str, value) -> dict:
    if not isinstance(value, dict) or "kind" not in value:
        raise ConfigError(f"key {key!r}: expected an object with a 'kind' entry")
    params = value.get("params", {})
    if not isinstance(params, dict):
        raise ConfigError(f"key {key!r}: 'params' must be an object")
    extra = set(value) - {"kind", "params"}
    if extra:
        raise ConfigError(f"key {key!r}: unexpected entries {sorted(extra)}")
    return {"kind": str(value["kind"]), "params": dict(params)}


def parse_config(text: str) -> RunConfig:
    """Parse and validate a JSON config document; an empty document gives the
    Example-1 defaults."""
    if text.strip():
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(
                f"config parse error at line {exc.lineno}, column {exc.colno}: {exc.msg}"
            ) from None
    else:
        raw = {}
    if not isinstance(raw, dict):
        raise ConfigError("config document must be a JSON object")

    known = set(RunConfig.__dataclass_fields__)
    unknown = set(raw) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")

    kw: dict[str, Any] = {}
    for key, value in raw.items():
        if key in _FLOAT_KEYS:
            kw[key] = _coerce(key, value, float)
        elif key in _INT_KEYS:
            kw[key] = _coerce(key, value, int)
        elif key == "domain":
            if not isinstance(value, (list, tuple)) or len(value) != 2:
                raise ConfigError("key 'domain': expected [a, b]")
            kw[key] = (_coerce(key, value[0], float), _coerce(key, value[1], float))
        elif key in ("force", "initial", "source"):
            kw[key] = _field_entry(key, value)
        elif key == "variant":
            kw[key] = str(value)
        elif key == "snapshot_times":
            if not isinstance(value, list):
                raise ConfigError("key 'snapshot_times': expected a list of numbers")
            kw[key] = [_coerce(key, v, float) for v in value]
        elif key == "output_dir":
            kw[key] = str(value)
    return RunConfig(**kw).validate()


def serialize_config(cfg: RunConfig) -> str:
    return json.dumps(cfg.to_dict(), indent=2)


# export ----------------------------------------------------------------------


def _fmt(v: float) -> str:
    return f"{v:.17g}"


def snapshot_indices(tmesh: GradedTimeMesh, snapshot_times: Sequence[float]) -> list[tuple[float, int]]:
    """(requested time, node index) pairs under the nearest-node policy,
    dropping requests that land on an already chosen node."""
    chosen: list[tuple[float, int]] = []
    seen: dict[int, float] = {}
    for t in map(float, snapshot_times):
        if not 0.0 <= t <= tmesh.T:
            raise ValueError(f"snapshot time {t} outside [0, {tmesh.T}]")
        n = tmesh.nearest_index(t)
        if n in seen:
            warnings.warn(
                f"snapshot t={t} maps to node {n} (t={float(tmesh.nodes[n])!r}) already "
                f"taken by t={seen[n]}; keeping a single column",
                stacklevel=2,
            )
            continue
        seen[n] = t
        chosen.append((t, n))
    return chosen


def export_solution(history, grid: SpaceGrid, tmesh: GradedTimeMesh, snapshot_times, path) -> Path:
    """Write snapshots as CSV: one row per grid node, one column per time.

    Snapshots are taken at the nearest mesh node; the first line is a
    comment recording the requested and chosen times.
    """
    levels = getattr(history, "levels", history)
    chosen = snapshot_indices(tmesh, snapshot_times)
    for _, n in chosen:
        if n >= len(levels):
            raise ValueError(f"node {n} has not been computed (history has {len(levels)} levels)")
    path = Path(path)
    mapping = "; ".join(f"{t!r} -> t_{n}={float(tmesh.nodes[n])!r}" for t, n in chosen)
    try:
        with path.open("w", newline="") as fh:
            fh.write(f"# snapshots at nearest mesh node (no interpolation): {mapping}\n")
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["x"] + [f"t={float(tmesh.nodes[n])!r}" for _, n in chosen])
            for i, x in enumerate(grid.nodes):
                w.writerow([_fmt(x)] + [_fmt(levels[n][i]) for _, n in chosen])
    except OSError as exc:
        raise OSError(f"could not write {path}: {exc}") from exc
    return path


def diagnostics_records(report: RunReport, **extra) -> list[dict]:
    """Per-step records including the initial level (n = 0)."""
    first = diagnostics(report.spec, 0, report.levels[0])
    rows = [first] + list(report.records)
    return [dict(extra, **asdict(r)) for r in rows]


def write_json(obj, path) -> Path:
    path = Path(path)
    try:
        path.write_text(json.dumps(obj, indent=1))
    except OSError as exc:
        raise OSError(f"could not write {path}: {exc}") from exc
    return path


def write_error_table(table: ErrorTable, path) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["resolution", "error", "order"])
        for r in table.rows:
            w.writerow([r.resolution, _fmt(r.error), "" if r.order is None else _fmt(r.order)])
    return path


def write_gap_table(records: Sequence[GapRecord], path) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["alpha", "t", "gap"])
        for r in records:
            w.writerow([_fmt(r.alpha), _fmt(r.t), _fmt(r.gap)])
    return path


# experiments -----------------------------------------------------------------


def experiment_config(name: str, full: bool = False) -> RunConfig:
    """Base configuration of a named reproduction experiment."""
    cfg = RunConfig(nx=FULL_NX if full else EXPERIMENT_NX)
    if name == "example1":
        return cfg
    if name == "example2":
        return replace(
            cfg,
            force={"kind": ForceKind.SIN_T_PLUS_X.value, "params": {}},
            snapshot_times=[0.02, 0.045, 0.08, 0.125, 0.18, 0.245, 0.5],
        )
    if name == "example3":
        return replace(
            cfg,
            force={"kind": ForceKind.SIN_X_PLUS_T.value, "params": {}},
            snapshot_times=[0.02, 0.045, 0.08],
        )
    raise ConfigError(f"unknown experiment {name!r}; choose example1, example2 or example3")


def _alpha_tag(alpha: float) -> str:
    return f"{alpha:g}"


def solve(cfg: RunConfig, out_dir: Path) -> RunReport:
    out_dir.mkdir(parents=True, exist_ok=True)
    report = run(cfg.to_spec())
    export_solution(report.history, report.spec.grid, report.spec.tmesh,
                    cfg.snapshot_times, out_dir / "solution.csv")
    write_json(diagnostics_records(report, alpha=cfg.alpha), out_dir / "diagnostics.json")
    log.info("solved alpha=%s in %.2fs", cfg.alpha, report.wall_time)
    return report


def run_experiment(name: str, out_dir: Path, full: bool = False) -> list[Path]:
    """Run a named experiment and return the files written."""
    base = experiment_config(name, full)
    out_dir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    diag: list[dict] = []

    if name in ("example1", "example2"):
        for a in EXPERIMENT_ALPHAS:
            cfg = replace(base, alpha=a)
            rep = run(cfg.to_spec())
            log.info("%s alpha=%s done in %.2fs", name, a, rep.wall_time)
            written.append(export_solution(rep.history, rep.spec.grid, rep.spec.tmesh,
                                           cfg.snapshot_times,
                                           out_dir / f"solution_alpha_{_alpha_tag(a)}.csv"))
            diag.extend(diagnostics_records(rep, alpha=a))
    else:
        for a in (0.25, 0.75, 1.0):
            for variant in Variant:
                cfg = replace(base, alpha=a, variant=variant.value)
                rep = run(cfg.to_spec())
                written.append(export_solution(
                    rep.history, rep.spec.grid, rep.spec.tmesh, cfg.snapshot_times,
                    out_dir / f"solution_{variant.value}_alpha_{_alpha_tag(a)}.csv"))
                diag.extend(diagnostics_records(rep, alpha=a, variant=variant.value))
        gaps = model_gap_study([0.25, 0.75, 1.0], base.to_spec(), base.snapshot_times)
        written.append(write_gap_table(gaps, out_dir / "gap.csv"))
    written.append(write_json(diag, out_dir / "diagnostics.json"))
    return written


def _exact_reference(cfg: RunConfig):
    """Closed-form reference if the config is the plain subdiffusion problem on (0,1)."""
    plain = (
        cfg.force["kind"] == "zero"
        and cfg.source["kind"] == "zero"
        and cfg.initial["kind"] == "sine_mode"
        and tuple(cfg.domain) == (0.0, 1.0)
        and cfg.D == 1.0
    )
    if not plain:
        return None
    m = int(cfg.initial.get("params", {}).get("wavenumber", 1))
    return lambda t, x: subdiffusion_reference(cfg.alpha, m, t, x)


# argument handling -----------------------------------------------------------


def _read_config(path: str) -> RunConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return parse_config(text)


def _float_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated numbers, got {text!r}")


def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated integers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fracfp", description=__doc__.split("\n")[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="run one configuration")
    s.add_argument("--config", required=True)
    s.add_argument("--out", help="output directory (overrides output_dir)")

    e = sub.add_parser("experiment", help="run a named reproduction experiment")
    e.add_argument("name", choices=["example1", "example2", "example3"])
    e.add_argument("--full", action="store_true", help=f"use nx={FULL_NX} instead of {EXPERIMENT_NX}")
    e.add_argument("--out", default="out")

    st = sub.add_parser("study", help="convergence or model-gap studies")
    st_sub = st.add_subparsers(dest="study", required=True)
    c = st_sub.add_parser("convergence")
    c.add_argument("--config", required=True)
    c.add_argument("--levels", type=_int_list, help="resolutions; default N, 2N, 4N")
    c.add_argument("--refine", choices=["time", "space"], default="time")
    c.add_argument("--out", help="output directory (overrides output_dir)")
    g = st_sub.add_parser("gap")
    g.add_argument("--alphas", type=_float_list, required=True)
    g.add_argument("--times", type=_float_list, default=[0.02, 0.045, 0.08])
    g.add_argument("--full", action="store_true")
    g.add_argument("--out", default="out")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        if args.command == "solve":
            cfg = _read_config(args.config)
            solve(cfg, Path(args.out or cfg.output_dir))
        elif args.command == "experiment":
            for path in run_experiment(args.name, Path(args.out), args.full):
                print(path)
        elif args.study == "convergence":
            cfg = _read_config(args.config)
            spec = cfg.to_spec()
            levels = args.levels or [cfg.N if args.refine == "time" else cfg.nx]
            if not args.levels:
                levels = [levels[0], 2 * levels[0], 4 * levels[0]]
            table = convergence_study(spec, levels, args.refine, _exact_reference(cfg))
            out = Path(args.out or cfg.output_dir)
            out.mkdir(parents=True, exist_ok=True)
            print(write_error_table(table, out / "error_table.csv"))
        else:
            bad = [a for a in args.alphas if not 0.0 < a <= 1.0]
            if bad:
                raise ConfigError(f"alpha must lie in (0,1]; offending: {bad}")
            base = experiment_config("example3", args.full)
            out = Path(args.out)
            out.mkdir(parents=True, exist_ok=True)
            gaps = model_gap_study(args.alphas, base.to_spec(), args.times)
            print(write_gap_table(gaps, out / "gap.csv"))
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (StepError, SingularSystemError, ConvergenceError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return 4
    return 0


if __name__ == "__main__":
    sys.exit(main())
