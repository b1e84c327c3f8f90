"""Command line front door.

Subcommands mirror the library surface: `kernel` builds distance kernels,
`embed` runs the optimizer, `sample` generates triplets from labels or
logged screen interactions, `eval` scores embeddings and sweeps the mixing
weight, `serve` starts the HTTP session service.

Exit codes: 0 success, 1 runtime failure (optimizer blow-ups, invalid
values), 2 usage and file errors. Diagnostics go to stderr; file errors
name the offending path and line.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace

import numpy as np

from .affinity import affinity_matrix
from .evaluate import labeling_curve, save_curve
from .io import (
    fmt,
    load_embedding,
    load_features,
    load_kernel,
    load_labeled_ids,
    load_labels,
    load_triplets,
    save_embedding,
    save_kernel,
    save_triplets,
)
from .kernels import assignment_kernel, euclidean_kernel, load_token_lists, load_token_vectors
from .optimize import auto_lambda, embed, initial_coords
from .triplets import expand_selection, sample_from_labels, split, violation_fraction
from .types import EmbedConfig, ParseError, TripletSet, index_of


def _lambda_arg(value: str) -> float | None:
    if value == "auto":
        return None
    try:
        w = float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'auto' or a number, got {value!r}")
    if not 0.0 <= w <= 1.0:
        raise argparse.ArgumentTypeError(f"lambda must be in [0, 1], got {value}")
    return w


def _grid_arg(value: str) -> list[float]:
    try:
        return [float(c) for c in value.split(",") if c.strip() != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {value!r}")


def _int_grid_arg(value: str) -> list[int]:
    try:
        return [int(c) for c in value.split(",") if c.strip() != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {value!r}")


def _add_embed_opts(p: argparse.ArgumentParser, with_lambda: bool = True) -> None:
    if with_lambda:
        p.add_argument("--lambda", dest="lam", type=_lambda_arg, default=None,
                       metavar="X|auto", help="triplet weight; 'auto' balances gradient norms")
        p.add_argument("--alpha", type=float, default=1.0, help="triplet kernel tail weight")
    p.add_argument("--perplexity", type=float, default=30.0)
    p.add_argument("--iters", type=int, default=300)
    p.add_argument("--exaggeration-iters", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ktembed",
                                     description="Kernel + triplet embeddings")
    sub = parser.add_subparsers(dest="command", required=True)

    kernel = sub.add_parser("kernel", help="build a distance kernel")
    ksub = kernel.add_subparsers(dest="kind", required=True)
    keuc = ksub.add_parser("euclidean", help="Euclidean distances between feature rows")
    keuc.add_argument("--features", required=True)
    keuc.add_argument("--out", required=True)
    kasn = ksub.add_parser("assignment",
                           help="matching-similarity kernel over token lists")
    kasn.add_argument("--tokens", required=True)
    kasn.add_argument("--vectors", required=True)
    kasn.add_argument("--out", required=True)

    emb = sub.add_parser("embed", help="optimize a low-dimensional embedding")
    emb.add_argument("--kernel", required=True)
    emb.add_argument("--triplets", default=None)
    _add_embed_opts(emb)
    emb.add_argument("--out", required=True)
    emb.add_argument("--trace", default=None, help="write per-iteration costs as CSV")

    samp = sub.add_parser("sample", help="generate triplets")
    ssub = samp.add_subparsers(dest="kind", required=True)
    slab = ssub.add_parser("labels", help="exhaustive class-label triplets over a prefix")
    slab.add_argument("--labels", required=True)
    slab.add_argument("--n", type=int, required=True, help="labeled prefix length")
    slab.add_argument("--cap", type=int, default=None)
    slab.add_argument("--seed", type=int, default=0)
    slab.add_argument("--out", required=True)
    sscr = ssub.add_parser("screens", help="expand logged screen selections")
    sscr.add_argument("--log", required=True, help="JSON list of ref/selected/shown records")
    sscr.add_argument("--out", required=True)

    ev = sub.add_parser("eval", help="score embeddings")
    esub = ev.add_subparsers(dest="kind", required=True)
    etri = esub.add_parser("triplet-error", help="violated fraction of a triplet set")
    etri.add_argument("--embedding", required=True)
    etri.add_argument("--triplets", required=True)
    elab = esub.add_parser("labeling", help="accuracy curve over growing labeled prefix")
    elab.add_argument("--kernel", required=True)
    elab.add_argument("--labels", required=True)
    elab.add_argument("--n-grid", type=_int_grid_arg, required=True, metavar="N0,N1,...")
    elab.add_argument("--seeds", type=int, default=5)
    elab.add_argument("--cap", type=int, default=None)
    _add_embed_opts(elab, with_lambda=False)
    elab.add_argument("--out", default=None, help="CSV path (default stdout)")
    eswp = esub.add_parser("lambda-sweep",
                           help="held-out triplet error across mixing weights")
    eswp.add_argument("--kernel", required=True)
    eswp.add_argument("--triplets", required=True)
    eswp.add_argument("--grid", type=_grid_arg, required=True, metavar="W0,W1,...")
    eswp.add_argument("--holdout", type=float, default=0.2)
    eswp.add_argument("--alpha", type=float, default=1.0)
    eswp.add_argument("--perplexity", type=float, default=30.0)
    eswp.add_argument("--iters", type=int, default=300)
    eswp.add_argument("--exaggeration-iters", type=int, default=100)
    eswp.add_argument("--seed", type=int, default=0)
    eswp.add_argument("--out", default=None, help="CSV path (default stdout)")

    srv = sub.add_parser("serve", help="run the HTTP session service")
    srv.add_argument("--host", default="127.0.0.1")
    srv.add_argument("--port", type=int, default=8000)
    srv.add_argument("--features", default=None)
    srv.add_argument("--kernel", default=None)
    srv.add_argument("--labels", default=None)
    srv.add_argument("--static-dir", default=None, help="directory of UI files to serve at /")
    return parser


def _make_config(args, triplet_weight) -> EmbedConfig:
    return EmbedConfig(
        triplet_weight=triplet_weight,
        alpha=getattr(args, "alpha", 1.0),
        perplexity=args.perplexity,
        total_iters=args.iters,
        exaggeration_iters=args.exaggeration_iters,
        seed=args.seed,
    )


def cmd_kernel(args, parser) -> int:
    if args.kind == "euclidean":
        save_kernel(euclidean_kernel(load_features(args.features)), args.out)
    else:
        lists = load_token_lists(args.tokens)
        table = load_token_vectors(args.vectors)
        kernel, shift = assignment_kernel(lists, table)
        save_kernel(kernel, args.out, comment=f"assignment kernel, shift {fmt(shift)}")
    return 0


def cmd_embed(args, parser) -> int:
    kernel = load_kernel(args.kernel)
    if args.triplets is not None:
        triplets = load_triplets(args.triplets, kernel.ids)
    else:
        triplets = TripletSet.empty()
        if args.lam is not None and args.lam > 0.0:
            parser.error("--lambda > 0 requires --triplets")
    cfg = _make_config(args, args.lam)
    p = affinity_matrix(kernel, cfg.perplexity)
    if len(triplets) == 0:
        weight = 0.0
    elif cfg.triplet_weight is None:
        weight = auto_lambda(p, triplets, initial_coords(kernel.n, cfg.d, cfg.seed),
                             alpha=cfg.alpha)
    else:
        weight = cfg.triplet_weight
    cfg = replace(cfg, triplet_weight=weight)
    y, trace = embed(kernel, triplets, cfg, p=p)
    save_embedding(y, args.out)
    if args.trace:
        trace.write_csv(args.trace)
    print(f"lambda {fmt(weight)}")
    return 0


def cmd_sample(args, parser) -> int:
    if args.kind == "labels":
        ids, labels = load_labeled_ids(args.labels)
        t = sample_from_labels(labels, args.n, cap=args.cap, seed=args.seed)
        save_triplets(t, ids, args.out)
        print(f"{len(t)} triplets")
        return 0
    with open(args.log) as fh:
        try:
            log = json.load(fh)
        except json.JSONDecodeError as e:
            raise ParseError(f"{args.log}: invalid JSON ({e})") from None
    if isinstance(log, dict):
        log = log.get("screens")
    if not isinstance(log, list):
        raise ParseError(f"{args.log}: expected a list of screen records")
    ids: list[str] = []
    seen = set()
    for rec in log:
        for oid in [rec.get("ref")] + list(rec.get("shown", [])):
            if oid not in seen:
                seen.add(oid)
                ids.append(oid)
    index = index_of(ids)
    parts = []
    for recno, rec in enumerate(log):
        try:
            ref = index[rec["ref"]]
            shown = [index[s] for s in rec["shown"]]
            selected = [index[s] for s in rec.get("selected", [])]
        except KeyError as e:
            raise ParseError(f"{args.log}: screen {recno}: unknown or missing id {e}") from None
        try:
            t = expand_selection(ref, selected, shown)
        except ValueError as e:
            raise ParseError(f"{args.log}: screen {recno}: {e}") from None
        if len(t):
            parts.append(t.indices)
    merged = TripletSet(np.concatenate(parts)) if parts else TripletSet.empty()
    save_triplets(merged, ids, args.out)
    print(f"{len(merged)} triplets")
    return 0


def cmd_eval(args, parser) -> int:
    if args.kind == "triplet-error":
        y = load_embedding(args.embedding)
        t = load_triplets(args.triplets, y.ids)
        print(fmt(violation_fraction(y, t)))
        return 0

    if args.kind == "labeling":
        kernel = load_kernel(args.kernel)
        labels = load_labels(args.labels, kernel.ids)
        cfg = _make_config(args, None)
        points = labeling_curve(kernel, labels, args.n_grid, cfg,
                                seed=args.seed, n_seeds=args.seeds, cap=args.cap)
        if args.out:
            save_curve(points, args.out)
        else:
            sys.stdout.write("n,mean_accuracy,sem,seeds\n")
            for pt in points:
                sys.stdout.write(f"{pt.n},{fmt(pt.mean_accuracy)},{fmt(pt.sem)},{pt.seeds}\n")
        return 0

    kernel = load_kernel(args.kernel)
    triplets = load_triplets(args.triplets, kernel.ids)
    train, test = split(triplets, args.holdout, seed=args.seed)
    if len(test) == 0 or len(train) == 0:
        raise ValueError("holdout split left an empty side; too few triplets")
    rows = []
    for w in args.grid:
        cfg = _make_config(args, w)
        y, _ = embed(kernel, train, cfg)
        rows.append((w, violation_fraction(y, test)))
    out = sys.stdout if args.out is None else open(args.out, "w")
    try:
        out.write("lambda,holdout_error\n")
        for w, err in rows:
            out.write(f"{fmt(w)},{fmt(err)}\n")
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


def cmd_serve(args, parser) -> int:
    if args.features is None and args.kernel is None:
        parser.error("serve needs --features or --kernel")
    import uvicorn

    from .service import build_default_datasets, create_app

    datasets = build_default_datasets(
        features_path=args.features, kernel_path=args.kernel, labels_path=args.labels
    )
    app = create_app(datasets, static_dir=args.static_dir)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "kernel": cmd_kernel,
        "embed": cmd_embed,
        "sample": cmd_sample,
        "eval": cmd_eval,
        "serve": cmd_serve,
    }
    try:
        return handlers[args.command](args, parser)
    except ParseError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except FileNotFoundError as e:
        print(f"error: {e.filename or e}: file not found", file=sys.stderr)
        return 2
    except (ValueError, FloatingPointError, KeyError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
