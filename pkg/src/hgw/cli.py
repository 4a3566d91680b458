"""``hgw`` command line interface.

Exit codes: 0 success, 1 a verification found a violation, 2 usage
error, 3 input error (unreadable or invalid graph, disconnected graph
where connectivity is required, unknown vertex).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .centrality import select_leader
from .checks import run_checks
from .errors import HGWError
from .graph import DEGREE_NORMALIZED, METRIC_VARIANTS, Graph, intrinsic_metric, laplacian, load_graph, verify_intrinsic
from .localization import DEFAULT_T_POINTS, default_t_grid, verify_localization
from .spectral import eigendecompose, heat_kernel
from .wavelet import DEFAULT_N_SCALES, build_frame, wavelet_atom

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_INPUT = 0, 1, 2, 3
COMMANDS = ("info", "spectrum", "heat", "wavelet", "transform", "frame", "localize", "centrality", "leader", "verify")


class InputError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    input: Path
    input_format: str = "auto"
    metric: str = DEGREE_NORMALIZED
    n_scales: int = DEFAULT_N_SCALES
    tmin: float | None = None
    tmax: float | None = None
    tpoints: int = DEFAULT_T_POINTS
    tlinear: bool = False
    fmt: str | None = None
    output: Path | None = None
    seed: int = 42

    def __post_init__(self):
        if self.n_scales < 1:
            raise ValueError("--scales must be at least 1")
        if self.tpoints < 2:
            raise ValueError("--tpoints must be at least 2")
        if self.tmin is not None and self.tmin <= 0:
            raise ValueError("--tmin must be positive")
        if self.tmin is not None and self.tmax is not None and self.tmax <= self.tmin:
            raise ValueError("--tmax must exceed --tmin")

    def t_grid(self, d) -> np.ndarray:
        if self.tmin is None and self.tmax is None:
            return default_t_grid(d, self.tpoints)
        default = default_t_grid(d, 2)
        lo = self.tmin if self.tmin is not None else default[0]
        hi = self.tmax if self.tmax is not None else default[-1]
        if self.tlinear:
            return np.linspace(lo, hi, self.tpoints)
        return np.geomspace(lo, hi, self.tpoints)


def fmt_float(x) -> str:
    return format(float(x), ".17g")


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if header:
        w.writerow(header)
    for row in rows:
        w.writerow([fmt_float(v) if isinstance(v, (float, np.floating)) else v for v in row])
    return buf.getvalue()


def _json_text(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


def _emit(cfg: RunConfig, text: str) -> None:
    if cfg.output is None:
        sys.stdout.write(text)
    else:
        cfg.output.write_text(text, encoding="utf-8")


def _matrix_csv(labels, mat) -> str:
    return _csv_text(["vertex", *labels], ([lab, *map(float, row)] for lab, row in zip(labels, mat)))


def _load(cfg: RunConfig) -> Graph:
    return load_graph(cfg.input, cfg.input_format)


def _vertex(g: Graph, label: str) -> int:
    try:
        return g.index(label)
    except KeyError as exc:
        raise InputError(str(exc.args[0])) from None


def cmd_info(cfg, args, g):
    d = eigendecompose(laplacian(g))
    info = {
        "vertices": g.n,
        "edges": g.n_edges,
        "total_weight": float(np.triu(g.weights).sum()),
        "dropped_self_loops": g.dropped_self_loops,
        "connected": d.connected,
        "lambda_1": d.fiedler_value,
        "lambda_max": d.lambda_max,
    }
    if d.connected:
        m = intrinsic_metric(g, cfg.metric)
        audit = verify_intrinsic(m)
        info.update(metric=cfg.metric, jump_size=m.jump_size, intrinsic=audit.passed,
                    max_vertex_sum=audit.max_vertex_sum)
    if cfg.fmt == "csv":
        _emit(cfg, _csv_text(["key", "value"], info.items()))
    else:
        _emit(cfg, _json_text(info))
    return EXIT_OK


def cmd_spectrum(cfg, args, g):
    d = eigendecompose(laplacian(g))
    if cfg.fmt == "json":
        _emit(cfg, _json_text({"eigenvalues": [float(x) for x in d.eigenvalues]}))
    else:
        _emit(cfg, _csv_text(["k", "lambda"], ((k, float(x)) for k, x in enumerate(d.eigenvalues))))
    if args.vectors:
        header = ["vertex", *(f"phi{k}" for k in range(d.n))]
        rows = ([lab, *map(float, row)] for lab, row in zip(g.labels, d.eigenvectors))
        Path(args.vectors).write_text(_csv_text(header, rows), encoding="utf-8")
    return EXIT_OK


def cmd_heat(cfg, args, g):
    if args.time < 0:
        raise InputError("--time must be nonnegative")
    h = heat_kernel(eigendecompose(laplacian(g)), args.time)
    _emit(cfg, _matrix_csv(g.labels, h))
    return EXIT_OK


def cmd_wavelet(cfg, args, g):
    if args.scale <= 0:
        raise InputError("--scale must be positive")
    d = eigendecompose(laplacian(g))
    psi = wavelet_atom(d, args.scale, _vertex(g, args.vertex))
    _emit(cfg, _csv_text(["vertex", "value"], zip(g.labels, map(float, psi))))
    return EXIT_OK


def _read_signal(path, g: Graph) -> np.ndarray:
    f = np.full(g.n, np.nan)
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.replace(",", " ").split()
            if len(parts) != 2:
                raise InputError(f"{path}:{lineno}: expected 'vertex value'")
            if parts[0] == "vertex":
                continue
            try:
                f[_vertex(g, parts[0])] = float(parts[1])
            except ValueError:
                raise InputError(f"{path}:{lineno}: value is not a number") from None
    missing = [g.labels[i] for i in np.flatnonzero(np.isnan(f))]
    if missing:
        raise InputError(f"{path}: signal missing vertices {missing[:5]}")
    return f


def _frame(cfg, args, g):
    d = eigendecompose(laplacian(g))
    scales = args.scale_list if getattr(args, "scale_list", None) else None
    return build_frame(d, scales, cfg.n_scales)


def cmd_transform(cfg, args, g):
    frame = _frame(cfg, args, g)
    coeffs = frame.analyze(_read_signal(args.signal, g))
    rows = ((float(s), lab, float(c)) for s, row in zip(frame.scales, coeffs) for lab, c in zip(g.labels, row))
    _emit(cfg, _csv_text(["scale", "vertex", "value"], rows))
    return EXIT_OK


def cmd_frame(cfg, args, g):
    frame = _frame(cfg, args, g)
    _emit(cfg, _json_text({"scales": [float(s) for s in frame.scales], "A": frame.frame_A, "B": frame.frame_B}))
    return EXIT_OK


def cmd_localize(cfg, args, g):
    d = eigendecompose(laplacian(g))
    d.require_connected()
    m = intrinsic_metric(g, cfg.metric)
    grid = cfg.t_grid(d)
    targets = ("heat", "wavelet") if args.target == "both" else (args.target,)
    out = {"metric": cfg.metric, "t_min": float(grid[0]), "t_max": float(grid[-1]), "t_points": len(grid)}
    total = 0
    for target in targets:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            rep = verify_localization(g, m, grid, target=target, d=d, seed=cfg.seed)
        for w in caught[:1]:
            print(f"warning: {w.message}", file=sys.stderr)
        summary = rep.summary()
        out[target] = summary
        total += summary["violations"]
        if args.samples:
            path = Path(args.samples)
            if len(targets) > 1:
                path = path.with_name(f"{path.stem}.{target}{path.suffix or '.csv'}")
            path.write_text(_csv_text(["t", "x", "y", "r", "actual", "bound", "ratio"], rep.rows()), encoding="utf-8")
    out["violations"] = total
    _emit(cfg, _json_text(out))
    return EXIT_VIOLATION if total else EXIT_OK


def cmd_centrality(cfg, args, g):
    rep = select_leader(g)
    if cfg.fmt == "csv":
        data = rep.to_dict()["vertices"]
        _emit(cfg, _csv_text(["label", "mdt", "ic", "rank"], ((v["label"], v["mdt"], v["ic"], v["rank"]) for v in data)))
    else:
        _emit(cfg, _json_text(rep.to_dict()))
    if not rep.sets_agree:
        print("warning: argmin-MDT and argmax-IC sets differ", file=sys.stderr)
    return EXIT_OK


def cmd_leader(cfg, args, g):
    rep = select_leader(g)
    if len(rep.tie_set) > 1:
        print(f"note: tie set of size {len(rep.tie_set)}: {' '.join(rep.tie_set)}", file=sys.stderr)
    _emit(cfg, rep.leader + "\n")
    return EXIT_OK


def cmd_verify(cfg, args, g):
    grid = None
    if cfg.tmin is not None or cfg.tmax is not None:
        d = eigendecompose(laplacian(g))
        grid = cfg.t_grid(d) if d.connected else None
    results = run_checks(g, cfg.metric, cfg.n_scales, grid, cfg.seed)
    failed = [c for c in results if not c.passed and not c.informational]
    if cfg.fmt == "csv":
        rows = ((c.name, c.passed, c.value, c.limit, c.informational) for c in results)
        _emit(cfg, _csv_text(["check", "passed", "value", "limit", "informational"], rows))
    else:
        _emit(cfg, _json_text({"passed": not failed, "failed": [c.name for c in failed],
                               "checks": [c.to_dict() for c in results]}))
    return EXIT_VIOLATION if failed else EXIT_OK


def _positive_float(text):
    val = float(text)
    if not val > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return val


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("input", type=Path, help="graph file (edge list or .mtx)")
    common.add_argument("--input-format", choices=("auto", "edgelist", "matrixmarket"), default="auto")
    common.add_argument("--metric", choices=METRIC_VARIANTS, default=DEGREE_NORMALIZED)
    common.add_argument("--scales", type=int, default=DEFAULT_N_SCALES, dest="n_scales", metavar="J")
    common.add_argument("--tmin", type=float)
    common.add_argument("--tmax", type=float)
    common.add_argument("--tpoints", type=int, default=DEFAULT_T_POINTS)
    common.add_argument("--tlinear", action="store_true", help="linear instead of log-spaced t grid")
    common.add_argument("--format", choices=("csv", "json"), dest="fmt")
    common.add_argument("--output", type=Path)
    common.add_argument("--seed", type=int, default=42)

    parser = argparse.ArgumentParser(prog="hgw", description="Hermitian graph wavelets and mean diffusion time")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    sub.add_parser("info", parents=[common], help="graph summary")
    p = sub.add_parser("spectrum", parents=[common], help="Laplacian eigenvalues as CSV")
    p.add_argument("--vectors", metavar="PATH", help="also write eigenvectors as a dense CSV")
    p = sub.add_parser("heat", parents=[common], help="heat kernel matrix at one time")
    p.add_argument("--time", type=float, required=True)
    p = sub.add_parser("wavelet", parents=[common], help="one wavelet atom")
    p.add_argument("--vertex", required=True)
    p.add_argument("--scale", type=float, required=True)
    for name, text in (("transform", "wavelet coefficients of a signal"), ("frame", "scales and frame bounds")):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("--scale-list", type=_positive_float, nargs="+", metavar="S",
                       help="explicit scales instead of the default geometric set")
        if name == "transform":
            p.add_argument("--signal", required=True, help="file of 'vertex value' lines")
    p = sub.add_parser("localize", parents=[common], help="check heat and wavelet localization bounds")
    p.add_argument("--target", choices=("heat", "wavelet", "both"), default="both")
    p.add_argument("--samples", metavar="PATH", help="write every sample as CSV")
    sub.add_parser("centrality", parents=[common], help="MDT and information centrality per vertex")
    sub.add_parser("leader", parents=[common], help="print the leader label")
    sub.add_parser("verify", parents=[common], help="run the full invariant suite")
    return parser


HANDLERS = {
    "info": cmd_info, "spectrum": cmd_spectrum, "heat": cmd_heat, "wavelet": cmd_wavelet,
    "transform": cmd_transform, "frame": cmd_frame, "localize": cmd_localize,
    "centrality": cmd_centrality, "leader": cmd_leader, "verify": cmd_verify,
}


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = RunConfig(args.input, args.input_format, args.metric, args.n_scales, args.tmin, args.tmax,
                        args.tpoints, args.tlinear, args.fmt, args.output, args.seed)
    except ValueError as exc:
        print(f"hgw: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        g = _load(cfg)
        return HANDLERS[args.command](cfg, args, g)
    except (HGWError, InputError, OSError, KeyError) as exc:
        print(f"hgw: {cfg.input}: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main() -> None:
    logging.basicConfig(level=logging.WARNING, format="%(name)s: %(message)s")
    sys.exit(run())


if __name__ == "__main__":
    main()
