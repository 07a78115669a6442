"""Command-line entry points: serve the HTTP API, run the separation test on
a label pair, and run the stability and power harnesses."""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys

from .dataset import global_pca, load_session, read_data_csv, read_labels_csv
from .experiments import power_experiment
from .mst import build_mst, selection_from_endpoints, selection_from_groups, medoids
from .rf import stability_experiment
from .separation import mst_test


def _add_session_files(parser, embedding_required: bool):
    parser.add_argument("--data", required=True, help="data matrix CSV")
    parser.add_argument("--labels", required=True, help="cluster labels CSV")
    if embedding_required:
        parser.add_argument("--embedding", required=True, help="2-D embedding CSV")
    parser.add_argument("--meta", default=None, help="optional metadata CSV")
    parser.add_argument("--pca-dims", type=int, default=None, help="reduce data before analysis")


def _load_data_labels(args):
    dataset = read_data_csv(args.data)
    lab_ids, clustering = read_labels_csv(args.labels)
    if clustering.n != dataset.n:
        raise ValueError(f"labels file has {clustering.n} rows, data has {dataset.n}")
    if lab_ids is not None and tuple(lab_ids) != dataset.row_ids:
        raise ValueError("id columns of data and labels files do not match")
    if args.pca_dims is not None:
        dataset, _ = global_pca(dataset, args.pca_dims)
    return dataset, clustering


def cmd_serve(args) -> int:
    import uvicorn

    from .service import SessionStore, create_app

    store = SessionStore()
    if args.snapshot and os.path.exists(args.snapshot):
        for sid in store.restore(args.snapshot):
            print(f"restored session {sid}")
    if args.data:
        dataset, embedding, clustering, meta = load_session(
            args.data, args.embedding, args.labels, args.meta
        )
        session = store.create(
            dataset,
            embedding,
            clustering,
            meta,
            args.pca_dims,
            files={
                "data_path": args.data,
                "embedding_path": args.embedding,
                "labels_path": args.labels,
                "meta_path": args.meta,
            },
        )
        print(f"preloaded session {session.id}")
    port = args.port or int(os.environ.get("MSTDIAG_PORT", "8000"))
    try:
        uvicorn.run(create_app(store), host=args.host, port=port)
    finally:
        if args.snapshot:
            store.snapshot(args.snapshot)
    return 0


def cmd_test(args) -> int:
    dataset, clustering = _load_data_labels(args)
    tree = build_mst(dataset)
    if args.label_a is not None and args.label_b is not None:
        classes = clustering.classes
        for lab in (args.label_a, args.label_b):
            if lab not in classes:
                raise ValueError(f"unknown class label {lab!r}")
        med = medoids(dataset, clustering)
        sel = selection_from_endpoints(
            tree, clustering, med[args.label_a], med[args.label_b]
        )
    elif args.rows_a and args.rows_b:
        rows_a = [dataset.index_of(r.strip()) for r in open(args.rows_a)]
        rows_b = [dataset.index_of(r.strip()) for r in open(args.rows_b)]
        sel = selection_from_groups(tree, dataset, rows_a, rows_b)
    else:
        raise ValueError("provide --label-a/--label-b or --rows-a/--rows-b")
    result = mst_test(
        dataset,
        tree,
        sel,
        replicates=args.replicates,
        variance_threshold=args.variance_threshold,
        seed=args.seed,
    )
    if args.json:
        print(json.dumps(result.to_payload()))
    else:
        print(f"observed crossings: {result.observed}")
        print(f"null mean: {result.null_mean:.4f}")
        print(f"null sd: {result.null_sd:.4f}")
        print(f"p-value: {result.p_value:.4f}")
    return 0


def cmd_stability(args) -> int:
    dataset, clustering = _load_data_labels(args)
    noise, permuted = stability_experiment(
        dataset, clustering, noise_sd=args.noise_sd, reps=args.reps, seed=args.seed
    )
    out = open(args.out, "w", newline="") if args.out else sys.stdout
    writer = csv.writer(out)
    writer.writerow(["arm", "distance"])
    for d in noise:
        writer.writerow(["noise", repr(d)])
    for d in permuted:
        writer.writerow(["permutation", repr(d)])
    if args.out:
        out.close()
    return 0


def cmd_power(args) -> int:
    c_values = [float(v) for v in args.c.split(",")]
    p_values = [int(v) for v in args.p.split(",")]
    rows = power_experiment(
        c_values,
        p_values,
        trials=args.trials,
        replicates=args.replicates,
        alpha=args.alpha,
        seed=args.seed,
    )
    out = open(args.out, "w", newline="") if args.out else sys.stdout
    writer = csv.writer(out)
    writer.writerow(["c", "p", "trials", "rejections", "rate"])
    for row in rows:
        writer.writerow([row.c, row.p, row.trials, row.rejections, repr(row.rate)])
    if args.out:
        out.close()
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mstdiag")
    sub = parser.add_subparsers(dest="command", required=True)

    serve = sub.add_parser("serve", help="start the HTTP API")
    serve.add_argument("--data", default=None)
    serve.add_argument("--embedding", default=None)
    serve.add_argument("--labels", default=None)
    serve.add_argument("--meta", default=None)
    serve.add_argument("--pca-dims", type=int, default=None)
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=None)
    serve.add_argument("--snapshot", default=None, help="JSON file to restore/persist sessions")
    serve.set_defaults(func=cmd_serve)

    test = sub.add_parser("test", help="run the separation test on two groups")
    _add_session_files(test, embedding_required=False)
    test.add_argument("--label-a", default=None)
    test.add_argument("--label-b", default=None)
    test.add_argument("--rows-a", default=None, help="file of row ids, one per line")
    test.add_argument("--rows-b", default=None)
    test.add_argument("--replicates", type=int, default=100)
    test.add_argument("--variance-threshold", type=float, default=0.90)
    test.add_argument("--seed", type=int, default=0)
    test.add_argument("--json", action="store_true")
    test.set_defaults(func=cmd_test)

    stability = sub.add_parser("stability", help="noise vs label-permutation distances")
    _add_session_files(stability, embedding_required=False)
    stability.add_argument("--reps", type=int, default=30)
    stability.add_argument("--noise-sd", type=float, default=None)
    stability.add_argument("--seed", type=int, default=0)
    stability.add_argument("--out", default=None)
    stability.set_defaults(func=cmd_stability)

    power = sub.add_parser("power", help="rejection rates over a (c, p) grid")
    power.add_argument("--c", required=True, help="comma-separated half-gaps")
    power.add_argument("--p", required=True, help="comma-separated dimensions")
    power.add_argument("--trials", type=int, default=100)
    power.add_argument("--replicates", type=int, default=100)
    power.add_argument("--alpha", type=float, default=0.05)
    power.add_argument("--seed", type=int, default=0)
    power.add_argument("--out", default=None)
    power.set_defaults(func=cmd_power)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
