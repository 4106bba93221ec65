"""Command-line interface: ingestion, analyses and machine-readable output.

Subcommands map one-to-one onto library operations.  Exit code 0 means
success, 2 an input validation failure and 1 an internal error.  Runs are
reproducible: identical inputs and seed produce byte-identical outputs,
and every randomized subcommand records its seed in the output header.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import __version__
from .baselines import energy_test, hotelling_test
from .descriptive import frechet_mean_sample, metric_covariance, metric_correlation, metric_variance
from .empirical import EmpiricalDistribution, barycenter
from .io import INGEST_FORMATS, format_float, ingest, write_csv, write_json
from .mds import classical_mds, profile_mds
from .metrics import MetricSpec, ValidationError, cross_distance_matrix, distance_matrix
from .profiles import build_profiles, profile_distance_matrix
from .ranks import quantile_groups, rank_all, transport_median, transport_quantile_set, trim
from .simulate import SCENARIOS, ScenarioSpec, generate_pair, power_study, scenario_metric
from .twosample import PooledDistances, distance_profile_test, pool_samples

DEFAULT_SEED = 42


def _add_input_args(sub, second: bool = False) -> None:
    sub.add_argument("--input", required=True, help="input path (file, or directory for adjacency_dir)")
    if second:
        sub.add_argument("--input2", help="second input path, same format as --input")
    sub.add_argument("--format", required=True, choices=INGEST_FORMATS, dest="fmt")
    sub.add_argument("--has-header", action="store_true", help="skip the first CSV row")
    sub.add_argument("--grid-shape", help="ROWSxCOLS for cdfgrid_csv, e.g. 64x64")
    sub.add_argument("--cell-area", type=float, help="grid cell area for cdfgrid_csv")


def _grid_shape(args):
    if args.grid_shape is None:
        return None
    try:
        r, c = args.grid_shape.lower().split("x")
        return int(r), int(c)
    except ValueError:
        raise ValidationError(f"--grid-shape must look like 64x64, got {args.grid_shape!r}")


def _load(args, path: str):
    return ingest(
        path,
        args.fmt,
        has_header=args.has_header,
        grid_shape=_grid_shape(args),
        cell_area=args.cell_area,
    )


def _load_distances(args) -> np.ndarray:
    """Distance matrix from either raw objects or a precomputed file."""
    if args.fmt == "distmatrix_csv":
        return _load(args, args.input)
    sample, spec = _load(args, args.input)
    return distance_matrix(spec, sample)


def _cmd_dist(args) -> None:
    if args.fmt == "distmatrix_csv":
        raise ValidationError("dist expects raw objects, not a distance matrix")
    d = _load_distances(args)
    write_csv(args.out, d.tolist())


def _cmd_profiles(args) -> None:
    d = _load_distances(args)
    profiles = build_profiles(d, mode=args.mode)
    write_csv(args.out, profiles.atoms.tolist())


def _silverman_curve(dist: EmpiricalDistribution, points: int = 256):
    """Gaussian-kernel density of an atom distribution, visualization only."""
    atoms, weights = dist.atoms, dist.weights
    n = atoms.size
    mu = dist.mean()
    sd = float(np.sqrt(np.maximum((weights * (atoms - mu) ** 2).sum(), 0.0)))
    q75 = dist.quantile(0.75)
    q25 = dist.quantile(0.25)
    spread = min(sd, (q75 - q25) / 1.34) if q75 > q25 else sd
    bw = max(0.9 * spread * n ** (-0.2), 1e-9)
    grid = np.linspace(atoms.min() - 3 * bw, atoms.max() + 3 * bw, points)
    z = (grid[:, None] - atoms[None, :]) / bw
    dens = (weights[None, :] * np.exp(-0.5 * z * z)).sum(axis=1) / (bw * np.sqrt(2 * np.pi))
    return grid, dens, bw


def _cmd_ranks(args) -> None:
    d = _load_distances(args)
    profiles = build_profiles(d, mode="with_self")
    ranks = rank_all(profiles)
    labels, thresholds = quantile_groups(ranks, args.bins)
    median = set(transport_median(ranks).tolist())
    rows = [
        [i, float(r), int(lab), int(i in median)]
        for i, (r, lab) in enumerate(zip(ranks, labels))
    ]
    comments = [f"thresholds={','.join(format_float(t) for t in thresholds)}"]
    write_csv(args.out, rows, header=["index", "rank", "group", "is_median"], comments=comments)

    groups = [
        [profiles.profiles[i] for i in np.flatnonzero(labels == g)]
        for g in range(1, args.bins + 1)
    ]
    bary_rows = []
    density_rows = []
    density_comments = []
    for g, members in enumerate(groups, start=1):
        if not members:
            continue
        center = barycenter(members, args.barycenter_grid)
        bary_rows.append([g, *center.atoms.astype(float).tolist()])
        if args.emit_density:
            grid, dens, bw = _silverman_curve(center)
            density_comments.append(f"group={g} bandwidth={format_float(bw)} rule=silverman")
            density_rows.extend([g, float(x), float(y)] for x, y in zip(grid, dens))
    bary_path = args.barycenters_out or _with_suffix(args.out, "_barycenters")
    write_csv(bary_path, bary_rows)
    if args.emit_density:
        write_csv(
            _with_suffix(args.out, "_density"),
            density_rows,
            header=["group", "value", "density"],
            comments=density_comments,
        )


def _with_suffix(path: str, suffix: str) -> str:
    if path.endswith(".csv"):
        return path[: -len(".csv")] + suffix + ".csv"
    return path + suffix


def _cmd_quantile_set(args) -> None:
    d = _load_distances(args)
    ranks = rank_all(build_profiles(d, mode="with_self"))
    alpha, members = transport_quantile_set(ranks, args.zeta)
    selected = set(members.tolist())
    rows = [[i, float(r), int(i in selected)] for i, r in enumerate(ranks)]
    write_csv(
        args.out,
        rows,
        header=["index", "rank", "in_set"],
        comments=[f"zeta={format_float(args.zeta)}", f"alpha={format_float(alpha)}"],
    )


def _cmd_trim(args) -> None:
    d = _load_distances(args)
    ranks = rank_all(build_profiles(d, mode="with_self"))
    kept = set(trim(ranks, args.alpha0).tolist())
    rows = [[i, float(r), int(i in kept)] for i, r in enumerate(ranks)]
    write_csv(
        args.out,
        rows,
        header=["index", "rank", "kept"],
        comments=[f"alpha0={format_float(args.alpha0)}"],
    )


def _pooled_from_args(args) -> PooledDistances:
    if args.fmt == "distmatrix_csv":
        if args.n is None:
            raise ValidationError("a pooled distance matrix needs --n (size of the first sample)")
        d = _load(args, args.input)
        return PooledDistances(n=args.n, m=d.shape[0] - args.n, d=d)
    if not args.input2:
        raise ValidationError("test needs --input2 unless --format distmatrix_csv")
    x, spec = _load(args, args.input)
    y, _ = _load(args, args.input2)
    return pool_samples(spec, x, y)


def _cmd_test(args) -> None:
    if args.method == "hotelling":
        if args.fmt != "vectors_csv":
            raise ValidationError("hotelling needs --format vectors_csv")
        if not args.input2:
            raise ValidationError("test needs --input2 for vector samples")
        x, _ = _load(args, args.input)
        y, _ = _load(args, args.input2)
        result = hotelling_test(x.objects, y.objects, k=args.K, alpha=args.alpha, seed=args.seed)
    else:
        pooled = _pooled_from_args(args)
        if args.method == "dp":
            result = distance_profile_test(pooled, k=args.K, alpha=args.alpha, seed=args.seed)
        else:
            result = energy_test(pooled, k=args.K, alpha=args.alpha, seed=args.seed)
    write_json(
        args.out,
        {
            "method": result.method,
            "statistic": result.statistic,
            "p_value": result.p_value,
            "K": result.k,
            "q_alpha_hat": result.q_alpha_hat,
            "alpha": result.alpha,
            "seed": result.seed,
            "n": result.n,
            "m": result.m,
        },
    )
    print(f"seed={result.seed} method={result.method} p_value={format_float(result.p_value)}")


def _cmd_mds(args) -> None:
    d = _load_distances(args)
    if args.mode == "object":
        emb = classical_mds(d, args.dim)
    else:
        emb = profile_mds(build_profiles(d, mode="with_self"), args.dim)
    comments = [f"eigenvalues={','.join(format_float(v) for v in emb.eigenvalues)}"]
    write_csv(args.out, emb.coordinates.tolist(), comments=comments)


def _cmd_describe(args) -> None:
    rows = []
    if args.fmt == "distmatrix_csv":
        d = _load(args, args.input)
    else:
        sample, spec = _load(args, args.input)
        d = distance_matrix(spec, sample)
    summary = frechet_mean_sample(d)
    rows.append(["n", d.shape[0]])
    rows.append(["frechet_mean_index", summary.mean_index])
    rows.append(["frechet_mean_ties", ";".join(str(i) for i in summary.tie_indices)])
    rows.append(["frechet_variance", float(summary.frechet_variance)])
    rows.append(["metric_variance", float(metric_variance(d))])
    if args.input2:
        if args.fmt == "distmatrix_csv":
            raise ValidationError("paired covariance needs raw objects, not distance matrices")
        sample2, _ = _load(args, args.input2)
        dy = distance_matrix(spec, sample2)
        dxy = cross_distance_matrix(spec, sample, sample2)
        rows.append(["metric_covariance", float(metric_covariance(d, dy, dxy))])
        rows.append(["metric_correlation", float(metric_correlation(d, dy, dxy))])
    write_csv(args.out, rows, header=["statistic", "value"])


def _scenario_from_args(args, param: float) -> ScenarioSpec:
    return ScenarioSpec(
        name=args.scenario,
        param=param,
        n=args.n,
        m=args.m,
        p=args.p,
        nodes=args.nodes,
        grid_size=args.grid_size,
        extrapolation=args.extrapolation,
    )


def _write_sample(sample, scenario: str, path_prefix: str, tag: str, seed: int) -> None:
    comments = [f"seed={seed}", f"scenario={scenario}"]
    if scenario.startswith("gauss2d"):
        n, r, c = sample.objects.shape
        comments.append(f"grid_shape={r}x{c}")
        write_csv(f"{path_prefix}_{tag}.csv", sample.objects.reshape(n, -1).tolist(), comments=comments)
    elif scenario == "prefattach_network":
        from pathlib import Path

        outdir = Path(f"{path_prefix}_{tag}")
        outdir.mkdir(parents=True, exist_ok=True)
        for i, mat in enumerate(sample.objects):
            write_csv(str(outdir / f"net_{i:04d}.csv"), mat.tolist())
        (outdir / "seed.txt").write_text(f"seed={seed}\n")
    else:
        write_csv(f"{path_prefix}_{tag}.csv", sample.objects.tolist(), comments=comments)


def _cmd_simulate(args) -> None:
    spec = _scenario_from_args(args, args.param)
    x, y = generate_pair(spec, np.random.SeedSequence(args.seed))
    _write_sample(x, spec.name, args.out, "x", args.seed)
    _write_sample(y, spec.name, args.out, "y", args.seed)
    print(f"seed={args.seed} scenario={spec.name} param={format_float(spec.param)}")


def _cmd_power(args) -> None:
    try:
        grid = [float(v) for v in args.grid.split(",")]
    except ValueError:
        raise ValidationError(f"--grid must be comma-separated numbers, got {args.grid!r}")
    spec = _scenario_from_args(args, grid[0])
    curve = power_study(
        spec, grid, test=args.test, runs=args.runs, k=args.K, alpha=args.alpha, seed=args.seed
    )
    rows = [
        [float(p), float(r), float(s), curve.runs, curve.k, float(curve.alpha)]
        for p, r, s in zip(curve.params, curve.rates, curve.ses)
    ]
    write_csv(
        args.out,
        rows,
        header=["param", "rejection_rate", "se", "runs", "K", "alpha"],
        comments=[f"seed={curve.seed}", f"scenario={curve.scenario}", f"test={curve.test}"],
    )
    print(f"seed={curve.seed} scenario={curve.scenario} test={curve.test}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="distprofile",
        description="Distance-profile statistics for random objects in metric spaces",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subs = parser.add_subparsers(dest="command", required=True)

    sub = subs.add_parser("dist", help="pairwise distance matrix of one sample")
    _add_input_args(sub)
    sub.add_argument("--out", required=True)
    sub.set_defaults(func=_cmd_dist)

    sub = subs.add_parser("profiles", help="per-object distance profiles")
    _add_input_args(sub)
    sub.add_argument("--mode", choices=["with_self", "leave_one_out"], default="with_self")
    sub.add_argument("--out", required=True)
    sub.set_defaults(func=_cmd_profiles)

    sub = subs.add_parser("ranks", help="transport ranks, median, bins and barycenters")
    _add_input_args(sub)
    sub.add_argument("--bins", type=int, default=10)
    sub.add_argument("--barycenter-grid", type=int, default=100)
    sub.add_argument("--barycenters-out", help="barycenter CSV (default: <out>_barycenters.csv)")
    sub.add_argument("--emit-density", action="store_true",
                     help="also write Gaussian-kernel density curves of the barycenters")
    sub.add_argument("--out", required=True)
    sub.set_defaults(func=_cmd_ranks)

    sub = subs.add_parser("quantile-set", help="most-central index set of a given mass")
    _add_input_args(sub)
    sub.add_argument("--zeta", type=float, required=True)
    sub.add_argument("--out", required=True)
    sub.set_defaults(func=_cmd_quantile_set)

    sub = subs.add_parser("trim", help="drop objects below a rank threshold")
    _add_input_args(sub)
    sub.add_argument("--alpha0", type=float, required=True)
    sub.add_argument("--out", required=True)
    sub.set_defaults(func=_cmd_trim)

    sub = subs.add_parser("test", help="two-sample test with permutation calibration")
    _add_input_args(sub, second=True)
    sub.add_argument("--method", choices=["dp", "energy", "hotelling"], default="dp")
    sub.add_argument("--n", type=int, help="first-sample size for a pooled distance matrix")
    sub.add_argument("--K", type=int, default=1000)
    sub.add_argument("--alpha", type=float, default=0.05)
    sub.add_argument("--seed", type=int, default=DEFAULT_SEED)
    sub.add_argument("--out", required=True, help="JSON result path")
    sub.set_defaults(func=_cmd_test)

    sub = subs.add_parser("mds", help="classical MDS of objects or their profiles")
    _add_input_args(sub)
    sub.add_argument("--mode", choices=["object", "profile"], default="object")
    sub.add_argument("--dim", type=int, default=2)
    sub.add_argument("--out", required=True)
    sub.set_defaults(func=_cmd_mds)

    sub = subs.add_parser("describe", help="Fréchet and metric variance descriptors")
    _add_input_args(sub, second=True)
    sub.add_argument("--out", required=True)
    sub.set_defaults(func=_cmd_describe)

    for name, helptext in (
        ("simulate", "generate one scenario sample pair"),
        ("power", "Monte-Carlo power curve over a parameter grid"),
    ):
        sub = subs.add_parser(name, help=helptext)
        sub.add_argument("--scenario", choices=SCENARIOS, required=True)
        sub.add_argument("--n", type=int, default=100)
        sub.add_argument("--m", type=int, default=100)
        sub.add_argument("--p", type=int, default=30, help="vector dimension")
        sub.add_argument("--nodes", type=int, default=200, help="network node count")
        sub.add_argument("--grid-size", type=int, default=64, help="CDF grid resolution")
        sub.add_argument("--extrapolation", action="store_true",
                         help="allow parameters outside the studied ranges")
        sub.add_argument("--seed", type=int, default=DEFAULT_SEED)
        sub.add_argument("--out", required=True)
        if name == "simulate":
            sub.add_argument("--param", type=float, required=True)
            sub.set_defaults(func=_cmd_simulate)
        else:
            sub.add_argument("--grid", required=True, help="comma-separated parameter values")
            sub.add_argument("--test", choices=["dp", "energy", "hotelling"], default="dp")
            sub.add_argument("--runs", type=int, default=500)
            sub.add_argument("--K", type=int, default=1000)
            sub.add_argument("--alpha", type=float, default=0.05)
            sub.set_defaults(func=_cmd_power)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - the CLI boundary reports and exits
        print(f"internal error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
