"""Command-line frontend: generate datasets, fit/train models, evaluate, report.

All diagnostics go to stderr; stdout carries only machine-readable output
(one-line key=value metric records, prediction lines, CSV rows).  Exit code
is 0 exactly when the command completed.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from . import datasets, figures, measurement, mlp, quadratic
from .metrics import Metrics, compute_metrics

# Default master seed; override with --seed or the COLLNEG_SEED environment
# variable (flag wins over environment).
DEFAULT_SEED = 0xC011EC7

_EPILOG = (
    f"The default seed is the fixed constant 0x{DEFAULT_SEED:X} ({DEFAULT_SEED}); "
    "it is never time-based.  Set COLLNEG_SEED to change it globally, or pass "
    "--seed to override both."
)


def _default_seed() -> int:
    env = os.environ.get("COLLNEG_SEED")
    return int(env, 0) if env else DEFAULT_SEED


def _log(msg: str) -> None:
    print(msg, file=sys.stderr)


# ---------------------------------------------------------------------------
# Shared pieces

def _load_dataset(path: str) -> datasets.Dataset:
    if not Path(path).exists():
        raise FileNotFoundError(f"dataset not found: {path}")
    return datasets.load(path)


def _load_any_model(path: str):
    """Return ("ann", MlpModel) or ("reg", QuadraticModel) by sniffing the file."""
    p = Path(path)
    if not p.exists():
        raise FileNotFoundError(f"model not found: {path}")
    if p.open("rb").read(4) == b"CMLP":
        return "ann", mlp.load_model(p)
    return "reg", quadratic.load_model(p)


def _evaluate(kind: str, model, ds: datasets.Dataset) -> tuple[Metrics, np.ndarray, np.ndarray]:
    actual = ds.negativities
    x = ds.features(model.b)
    if kind == "ann":
        predicted = mlp.predict_negativity(model, x)
    else:
        predicted = quadratic.predict(model, x)  # raw values feed the metrics
    return compute_metrics(actual, predicted), actual, np.asarray(predicted)


def _write_predictions(path: Path, actual: np.ndarray, predicted: np.ndarray) -> None:
    with path.open("w") as fh:
        fh.write("actual,predicted\n")
        for a, p in zip(actual, predicted):
            fh.write(f"{a:.17g},{p:.17g}\n")


def _read_predictions(path: Path) -> tuple[np.ndarray, np.ndarray]:
    rows = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    return rows[:, 0], rows[:, 1]


def _write_metrics_file(path: Path, line: str) -> None:
    path.write_text(line + "\n")


def _metrics_line(m: Metrics, kind: str, b: int, predictions: Path | None = None) -> str:
    extra = {"kind": kind, "b": str(b)}
    line = m.as_line(**extra)
    if predictions is not None:
        line += f" predictions={predictions.name}"
    return line


def _residual_histogram(actual: np.ndarray, predicted: np.ndarray) -> np.ndarray:
    counts, edges = np.histogram(actual - predicted, bins=figures.RESIDUAL_BINS)
    return np.column_stack([edges[:-1], edges[1:], counts])


# ---------------------------------------------------------------------------
# Commands

def _cmd_generate(args) -> int:
    threads = args.threads if not args.deterministic else 1
    ds = datasets.generate(args.n, args.seed, threads=threads)
    datasets.save(ds, args.out, fmt=args.format)
    zero_frac = datasets.zero_negativity_fraction(ds)
    _log(f"generated {len(ds)} records (seed {args.seed}) -> {args.out}")
    if len(ds):
        counts, edges = np.histogram(ds.negativities, bins=20, range=(0.0, 1.0))
        peak = counts.max() or 1
        _log("negativity distribution:")
        for c, lo, hi in zip(counts, edges[:-1], edges[1:]):
            bar = "#" * int(round(40 * c / peak))
            _log(f"  [{lo:4.2f},{hi:4.2f}) {c:>8d} {bar}")
        _log(f"zero-negativity fraction: {zero_frac:.4f}")
    print(f"count={len(ds)} seed={args.seed} zero_negativity_fraction={zero_frac:.6f} out={args.out}")
    return 0


def _cmd_fit_reg(args) -> int:
    train = _load_dataset(args.train)
    test = _load_dataset(args.test)
    model = quadratic.fit(train.features(args.b), train.negativities, args.b)
    out = Path(args.out)
    quadratic.save_model(model, out)
    m, actual, predicted = _evaluate("reg", model, test)
    pred_path = out.with_suffix(out.suffix + ".predictions.csv")
    _write_predictions(pred_path, actual, predicted)
    line = _metrics_line(m, "reg", args.b, pred_path)
    _write_metrics_file(out.with_suffix(out.suffix + ".metrics"), line)
    _log(f"fitted quadratic model b={args.b} on {len(train)} rows -> {out}")
    print(line)
    return 0


def _cmd_train_ann(args) -> int:
    train = _load_dataset(args.train)
    test = _load_dataset(args.test)
    hidden = tuple(int(h) for h in args.hidden.split(","))
    if len(hidden) != 2:
        raise ValueError(f"--hidden expects two comma-separated sizes, got {args.hidden!r}")
    cfg = mlp.TrainConfig(
        epochs=args.epochs,
        batch_size=args.batch,
        learning_rate=args.lr,
        hidden=hidden,
        seed=args.seed,
    )
    _log(
        f"training ANN b={args.b} hidden={hidden} epochs={cfg.epochs} "
        f"batch={cfg.batch_size} lr={cfg.learning_rate} on {len(train)} rows"
    )
    model, history = mlp.train(train.features(args.b), train.negativities ** 2, cfg)
    out = Path(args.out)
    mlp.save_model(model, out)
    loss_path = out.with_suffix(out.suffix + ".loss.csv")
    with loss_path.open("w") as fh:
        fh.write("epoch,loss\n")
        for i, v in enumerate(history):
            fh.write(f"{i},{v:.17g}\n")
    m, actual, predicted = _evaluate("ann", model, test)
    pred_path = out.with_suffix(out.suffix + ".predictions.csv")
    _write_predictions(pred_path, actual, predicted)
    line = _metrics_line(m, "ann", args.b, pred_path)
    _write_metrics_file(out.with_suffix(out.suffix + ".metrics"), line)
    _log(f"final training loss {history[-1]:.3e} -> {out}")
    print(line)
    return 0


def _cmd_eval(args) -> int:
    kind, model = _load_any_model(args.model)
    ds = _load_dataset(args.data)
    m, actual, predicted = _evaluate(kind, model, ds)
    hist = _residual_histogram(actual, predicted)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        pred_path = out / "predictions.csv"
        _write_predictions(pred_path, actual, predicted)
        np.savetxt(
            out / "residual_hist.csv",
            hist,
            delimiter=",",
            fmt="%.17g",
            header="bin_left,bin_right,count",
            comments="",
        )
        line = _metrics_line(m, kind, model.b, pred_path)
        _write_metrics_file(out / "metrics.txt", line)
        print(line)
    else:
        print(_metrics_line(m, kind, model.b))
        print("bin_left,bin_right,count")
        for lo, hi, c in hist:
            print(f"{lo:.17g},{hi:.17g},{int(c)}")
    return 0


def _cmd_predict(args) -> int:
    kind, model = _load_any_model(args.model)
    if args.features == "-":
        lines = sys.stdin.read().splitlines()
    else:
        lines = Path(args.features).read_text().splitlines()
    for raw in lines:
        line = raw.strip()
        if not line:
            continue
        x = np.array([float(tok) for tok in line.replace(",", " ").split()])
        if kind == "ann":
            value = mlp.predict_negativity(model, x)
        else:
            value = float(quadratic.predict_clipped(model, x))
        print(f"{value:.17g}")
    return 0


def _parse_metrics_file(path: Path) -> dict:
    text = path.read_text().strip()
    if not text:
        raise ValueError(f"{path}: empty metrics file")
    row = dict(tok.split("=", 1) for tok in text.splitlines()[0].split())
    missing = {"kind", "b", "r2", "tau", "mu", "mse", "n"} - row.keys()
    if missing:
        raise ValueError(f"{path}: metrics record lacks keys {sorted(missing)}")
    row["_dir"] = path.parent
    return row


def _cmd_report(args) -> int:
    rows = [_parse_metrics_file(Path(p)) for p in args.metrics]
    rows.sort(key=lambda r: (int(r["b"]), r["kind"]))
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    header = "b,kind,r2,tau,mu,mse,n"
    csv_lines = [header] + [
        ",".join([r["b"], r["kind"], r["r2"], r["tau"], r["mu"], r["mse"], r["n"]])
        for r in rows
    ]
    (out / "summary.csv").write_text("\n".join(csv_lines) + "\n")
    for line in csv_lines:
        print(line)

    _log(f"{'B':>3} {'kind':>5} {'R2':>9} {'tau':>8} {'mu':>9} {'mse':>10}")
    for r in rows:
        _log(
            f"{int(r['b']):>3} {r['kind']:>5} {float(r['r2']):>9.4f} "
            f"{float(r['tau']):>8.4f} {float(r['mu']):>9.4f} {float(r['mse']):>10.6f}"
        )

    series: dict[str, tuple[list[int], list[float], list[float]]] = {}
    for r in rows:
        bs, r2s, taus = series.setdefault(r["kind"], ([], [], []))
        bs.append(int(r["b"]))
        r2s.append(float(r["r2"]))
        taus.append(float(r["tau"]))
    if rows:
        figures.trend_figure(series, out / "trend.png")
        _log(f"wrote {out / 'trend.png'}")

    for r in rows:
        pred_name = r.get("predictions")
        if not pred_name:
            continue
        pred_path = r["_dir"] / pred_name
        if not pred_path.exists():
            _log(f"skipping scatter for b={r['b']} {r['kind']}: {pred_path} missing")
            continue
        actual, predicted = _read_predictions(pred_path)
        stem = f"{r['kind']}_b{int(r['b']):02d}"
        _write_predictions(out / f"scatter_{stem}.csv", actual, predicted)
        np.savetxt(
            out / f"residual_hist_{stem}.csv",
            _residual_histogram(actual, predicted),
            delimiter=",",
            fmt="%.17g",
            header="bin_left,bin_right,count",
            comments="",
        )
        m = Metrics(r2=float(r["r2"]), tau=float(r["tau"]), mu=float(r["mu"]),
                    mse=float(r["mse"]), n=int(r["n"]))
        fig_path = out / f"scatter_{stem}.png"
        figures.scatter_figure(actual, predicted, m, f"{r['kind'].upper()} B={r['b']}", fig_path)
        _log(f"wrote {fig_path}")
    return 0


# ---------------------------------------------------------------------------
# Parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="collneg",
        description="Collective-measurement simulation and negativity prediction models.",
        epilog=_EPILOG,
    )
    sub = parser.add_subparsers(dest="command", required=True)
    seed = _default_seed()

    p = sub.add_parser("generate", help="generate a seeded dataset", epilog=_EPILOG)
    p.add_argument("--n", type=int, required=True, help="number of records")
    p.add_argument("--seed", type=lambda s: int(s, 0), default=seed,
                   help=f"master seed (default 0x{DEFAULT_SEED:X})")
    p.add_argument("--out", required=True, help="output dataset path")
    p.add_argument("--format", choices=("csv", "bin"), default="csv")
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1,
                   help="generation worker threads (output is identical for any value)")
    p.add_argument("--deterministic", action="store_true",
                   help="force single-threaded generation")
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("fit-reg", help="fit the quadratic regression model")
    p.add_argument("--train", required=True)
    p.add_argument("--test", required=True)
    p.add_argument("--b", type=int, choices=range(5, 11), default=10,
                   help="number of probability features")
    p.add_argument("--out", required=True, help="model output path")
    p.set_defaults(func=_cmd_fit_reg)

    p = sub.add_parser("train-ann", help="train the neural network", epilog=_EPILOG)
    p.add_argument("--train", required=True)
    p.add_argument("--test", required=True)
    p.add_argument("--b", type=int, choices=range(5, 11), default=10)
    p.add_argument("--out", required=True, help="model output path")
    p.add_argument("--epochs", type=int, default=100)
    p.add_argument("--batch", type=int, default=256)
    p.add_argument("--lr", type=float, default=1e-3)
    p.add_argument("--hidden", default="256,128",
                   help="hidden layer sizes, e.g. 2000,1500")
    p.add_argument("--seed", type=lambda s: int(s, 0), default=seed,
                   help="weight init / shuffling seed")
    p.add_argument("--deterministic", action="store_true",
                   help="assert the fixed-seed reproducibility contract")
    p.set_defaults(func=_cmd_train_ann)

    p = sub.add_parser("eval", help="evaluate a model file on a dataset")
    p.add_argument("model")
    p.add_argument("data")
    p.add_argument("--out", help="directory for predictions and residual histogram")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("predict", help="predict negativity for feature rows")
    p.add_argument("model")
    p.add_argument("--features", default="-",
                   help="file of feature rows, or '-' for stdin (default)")
    p.set_defaults(func=_cmd_predict)

    p = sub.add_parser("report", help="consolidate metrics files into a table and figures")
    p.add_argument("metrics", nargs="+", help="metrics files from fit-reg/train-ann/eval")
    p.add_argument("--out", required=True, help="report output directory")
    p.set_defaults(func=_cmd_report)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, RuntimeError, OSError) as exc:
        _log(f"error: {exc}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
