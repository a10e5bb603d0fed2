"""Command line entry point: ``heavyband sample | spectrum | localize | study <kind> | verify``."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .ensemble import build_pattern, sample_matrix
from .errors import ConfigurationError
from .experiments.config import STUDY_KINDS, ExperimentConfig, load_config
from .experiments.persist import persist
from .experiments.studies import run_study
from .experiments.verify import run_verify
from .heavy_tail import TailLaw
from .localization import delocalization_scan
from .matrix_io import read_binary, read_text, write_binary, write_text
from .spectral import dense_eigh, lanczos_topk, write_eigenvectors_csv, write_spectrum_csv


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="INI-style config file")
    p.add_argument("--seed", type=int, help="root seed")
    p.add_argument("--replicas", type=int, help="number of replicas")
    p.add_argument("--out", help="output path")


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="heavyband", description="Heavy-tailed random band matrix experiments.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample", help="sample matrices to text (.txt) or binary (.bin) files")
    _common(p)
    p.add_argument("--n", type=int)
    p.add_argument("--mu", type=float)
    p.add_argument("--alpha", type=float)
    p.add_argument("--pattern", choices=("band", "cyclic_band"))
    p.add_argument("--variance-normalized", action="store_true", default=None)
    p.add_argument("--one-sided", action="store_true", help="positive entries only")

    p = sub.add_parser("spectrum", help="eigenvalues of a stored matrix to CSV")
    _common(p)
    p.add_argument("input")
    p.add_argument("--k", type=int, help="number of extreme pairs (Lanczos); full spectrum when omitted")
    p.add_argument("--which", default="both_ends", choices=("largest_algebraic", "largest_magnitude", "both_ends"))
    p.add_argument("--vectors", help="also write eigenvectors to this CSV")

    p = sub.add_parser("localize", help="localization report of the extreme eigenpairs of a stored matrix")
    _common(p)
    p.add_argument("input")
    p.add_argument("--c", type=float, default=0.25)
    p.add_argument("--eta0", type=float, default=0.4)
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--alpha", type=float, help="tail exponent of the entries (selects the c window)")

    p = sub.add_parser("study", help="run a Monte Carlo study")
    _common(p)
    p.add_argument("kind", choices=STUDY_KINDS)
    p.add_argument("--workers", type=int)

    p = sub.add_parser("verify", help="run the quick property suite")
    _common(p)
    return ap


def _config(args, kind: str) -> ExperimentConfig:
    over = {"seed": args.seed, "replicas": args.replicas}
    if getattr(args, "workers", None) is not None:
        over["workers"] = args.workers
    if args.config:
        cfg = load_config(args.config, **over)
        if cfg.kind != kind:
            cfg = cfg.replace(kind=kind)
        return cfg
    return ExperimentConfig(kind=kind, **{k: v for k, v in over.items() if v is not None})


def _read_matrix(path: str):
    with open(path, "rb") as fh:
        head = fh.read(4)
    return read_binary(path) if head == b"HBMX" else read_text(path)


def _cmd_sample(args) -> int:
    cfg = _config(args, "subcritical") if args.config else ExperimentConfig(kind="subcritical")
    n = args.n or cfg.n
    mu = args.mu if args.mu is not None else cfg.mu
    alpha = args.alpha if args.alpha is not None else cfg.alpha
    pattern = args.pattern or cfg.pattern
    vn = cfg.variance_normalized if args.variance_normalized is None else True
    seed = args.seed if args.seed is not None else cfg.seed
    if seed is None:
        raise ConfigurationError("a seed is mandatory (--seed or [study] seed)")
    replicas = args.replicas or 1
    law = TailLaw(alpha, cfg.scale, cfg.slowly_varying, cfg.sv_param, not args.one_sided and cfg.symmetrized, vn)
    pat = build_pattern(n, mu, pattern)
    out = Path(args.out or "matrix.txt")
    for r in range(replicas):
        m = sample_matrix(pat, law, seed, r)
        path = out if replicas == 1 else out.with_name(f"{out.stem}_{r:04d}{out.suffix}")
        (write_binary if path.suffix == ".bin" else write_text)(m, path)
        print(path)
    return 0


def _spectrum(m, k, which, seed):
    if k is None:
        return dense_eigh(m, vectors=True)
    return lanczos_topk(m, k, which=which, seed=seed or 0)


def _cmd_spectrum(args) -> int:
    m = _read_matrix(args.input)
    summ = _spectrum(m, args.k, args.which, args.seed)
    out = args.out or "spectrum.csv"
    write_spectrum_csv(summ, out)
    if args.vectors:
        write_eigenvectors_csv(summ, args.vectors)
    print(f"{summ.eigenvalues.size} eigenvalues ({summ.method}, converged={summ.converged}) -> {out}")
    return 0 if summ.converged else 1


def _cmd_localize(args) -> int:
    m = _read_matrix(args.input)
    if args.alpha is not None:
        m = m.__class__(m.pattern, m.values, TailLaw(args.alpha), m.seed, m.replica_index)
    k = min(args.k, m.n // 2) or 1
    summ = lanczos_topk(m, k, which="both_ends", seed=args.seed or 0) if 2 * k < m.n else dense_eigh(m)
    rep = delocalization_scan(summ, m, args.c, args.eta0)
    out = args.out or "localization.csv"
    rep.write_csv(out)
    print(f"L = {rep.L}, flagged = {rep.flagged} -> {out}")
    return 0


def _cmd_study(args) -> int:
    cfg = _config(args, args.kind)
    if args.out:
        cfg = cfg.replace(out=args.out)
    cfg.validate()
    summary = run_study(cfg)
    if cfg.out:
        persist(summary, cfg.out)
    scalars = {k: v for k, v in summary.aggregate.items() if isinstance(v, (int, float, bool, str))}
    print(json.dumps(scalars, indent=2))
    for name, ok in summary.assertions.items():
        print(f"{'PASS' if ok else 'FAIL'} {name} {cfg.assertions[name]}")
    return 0 if summary.passed else 1


def _cmd_verify(args) -> int:
    results = run_verify()
    for c in results:
        print(f"{'PASS' if c.ok else 'FAIL'} {c.name}: {c.detail}")
    return 0 if all(c.ok for c in results) else 1


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    handler = {
        "sample": _cmd_sample,
        "spectrum": _cmd_spectrum,
        "localize": _cmd_localize,
        "study": _cmd_study,
        "verify": _cmd_verify,
    }[args.command]
    try:
        return handler(args)
    except (ValueError, OSError, RuntimeError) as exc:
        print(f"heavyband: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
