"""Command-line front end.

Machine-readable results go to stdout, diagnostics to stderr. The store
lives in a directory (``--store`` or the ALERTPATHS_STORE environment
variable) holding one snapshot file; commands that mutate it take an
exclusive lock, read-only commands a shared one. Exit codes: 0 success,
2 argument errors, 3 parse errors, 4 store errors, 1 anything else.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import os
import sys
from pathlib import Path

from . import bench
from .errors import ParseError, StoreError
from .ingest import ingest_stream, reinsert_stream
from .maintenance import recompute_threat_scores
from .query import build_backward_tree, build_forward_tree, retrieve_paths, top_trees
from .render import color_hex, format_score, paths_to_table, tree_to_dot, tree_to_structured
from .store import AlertStore

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_STORE = 4

STORE_ENV_VAR = "ALERTPATHS_STORE"
STORE_FILENAME = "store.jsonl"
LOCK_FILENAME = ".lock"

try:
    import fcntl
except ImportError:  # non-POSIX; single-process use only
    fcntl = None  # type: ignore[assignment]


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except StoreError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_STORE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="alertpaths",
        description="Maintain alert paths over an IDS feed and answer triage queries.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, help_text: str, handler, store: bool = True):
        cmd = sub.add_parser(name, help=help_text)
        cmd.set_defaults(handler=handler)
        if store:
            cmd.add_argument(
                "--store",
                default=os.environ.get(STORE_ENV_VAR),
                help=f"store directory (default: ${STORE_ENV_VAR})",
            )
        return cmd

    cmd = add("ingest", "parse an alert feed and insert it", _cmd_ingest)
    cmd.add_argument("--input", required=True, help="feed file to read")
    cmd.add_argument("--format", choices=("eve", "csv"), default="eve")
    cmd.add_argument("--mode", choices=("chronological", "auto"), default="chronological")
    cmd.add_argument("--strict", action="store_true", help="fail on the first bad line")

    cmd = add("reinsert", "route every record through reinsertion", _cmd_reinsert)
    cmd.add_argument("--input", required=True, help="feed file to read")
    cmd.add_argument("--format", choices=("eve", "csv"), default="eve")
    cmd.add_argument("--strict", action="store_true", help="fail on the first bad line")

    add("score", "recompute every cached threat score", _cmd_score)

    cmd = add("paths", "paths between two endpoints, best first", _cmd_paths)
    cmd.add_argument("--origin", required=True)
    cmd.add_argument("--target", required=True)
    cmd.add_argument("--top", type=int, default=None, help="limit to the best K paths")

    cmd = add("tree", "reconstruct an alert tree", _cmd_tree)
    cmd.add_argument("--root", required=True)
    cmd.add_argument("--direction", choices=("forward", "backward"), default="forward")
    cmd.add_argument("--dot", default=None, help="write Graphviz source to this file")
    cmd.add_argument("--json", default=None, help="write the structured tree to this file")

    cmd = add("top", "ranked endpoints, paths, or trees", _cmd_top)
    cmd.add_argument("--what", choices=("endpoints", "paths", "trees"), required=True)
    cmd.add_argument("--k", type=int, required=True)
    cmd.add_argument("--direction", choices=("forward", "backward"), default="forward")

    add("stats", "store size counters", _cmd_stats)

    cmd = add("snapshot", "write the store to a portable file", _cmd_snapshot)
    cmd.add_argument("--output", required=True)

    cmd = add("load", "replace the store with a snapshot's contents", _cmd_load)
    cmd.add_argument("--input", required=True)

    cmd = add("bench", "synthetic workload checks", _cmd_bench, store=False)
    cmd.add_argument("workload", choices=("chain",))
    cmd.add_argument("--n", type=int, required=True, help="chain length in alerts")

    return parser


# ---------------------------------------------------------------------------
# store plumbing
# ---------------------------------------------------------------------------


def _store_dir(args: argparse.Namespace) -> Path:
    if not args.store:
        raise ValueError(
            f"no store directory; pass --store or set {STORE_ENV_VAR}"
        )
    return Path(args.store)


@contextlib.contextmanager
def _locked(directory: Path, exclusive: bool):
    directory.mkdir(parents=True, exist_ok=True)
    lock_path = directory / LOCK_FILENAME
    handle = open(lock_path, "a+")
    try:
        if fcntl is not None:
            fcntl.flock(handle, fcntl.LOCK_EX if exclusive else fcntl.LOCK_SH)
        yield
    finally:
        if fcntl is not None:
            fcntl.flock(handle, fcntl.LOCK_UN)
        handle.close()


def _open_store(directory: Path, must_exist: bool) -> AlertStore:
    store = AlertStore()
    snapshot = directory / STORE_FILENAME
    if snapshot.exists():
        store.load(snapshot)
    elif must_exist:
        raise StoreError(f"no store at {directory} (expected {snapshot})")
    return store


def _save_store(store: AlertStore, directory: Path) -> None:
    store.snapshot(directory / STORE_FILENAME)


def _warn_if_stale(store: AlertStore) -> None:
    if store.scores_stale:
        print(
            "warning: cached threat scores are stale; run `alertpaths score`",
            file=sys.stderr,
        )


# ---------------------------------------------------------------------------
# handlers
# ---------------------------------------------------------------------------


def _cmd_ingest(args: argparse.Namespace) -> int:
    directory = _store_dir(args)
    with _locked(directory, exclusive=True):
        store = _open_store(directory, must_exist=False)
        with open(args.input, "r", encoding="utf-8") as feed:
            report = ingest_stream(
                store,
                feed,
                fmt=args.format,
                mode=args.mode,
                strict=args.strict,
                progress=_progress,
            )
        _save_store(store, directory)
    for line_no, message in report.errors:
        print(f"line {line_no}: {message}", file=sys.stderr)
    print(json.dumps(report.to_dict(), sort_keys=True))
    return EXIT_OK


def _cmd_reinsert(args: argparse.Namespace) -> int:
    directory = _store_dir(args)
    with _locked(directory, exclusive=True):
        store = _open_store(directory, must_exist=False)
        with open(args.input, "r", encoding="utf-8") as feed:
            report = reinsert_stream(
                store, feed, fmt=args.format, strict=args.strict, progress=_progress
            )
        _save_store(store, directory)
    for line_no, message in report.errors:
        print(f"line {line_no}: {message}", file=sys.stderr)
    print(json.dumps(report.to_dict(), sort_keys=True))
    return EXIT_OK


def _cmd_score(args: argparse.Namespace) -> int:
    directory = _store_dir(args)
    with _locked(directory, exclusive=True):
        store = _open_store(directory, must_exist=True)
        endpoints_updated, paths_updated = recompute_threat_scores(store)
        _save_store(store, directory)
    print(
        json.dumps(
            {"endpoints_updated": endpoints_updated, "paths_updated": paths_updated},
            sort_keys=True,
        )
    )
    return EXIT_OK


def _cmd_paths(args: argparse.Namespace) -> int:
    directory = _store_dir(args)
    with _locked(directory, exclusive=False):
        store = _open_store(directory, must_exist=True)
    _warn_if_stale(store)
    found = retrieve_paths(store, args.origin, args.target)
    if args.top is not None:
        if args.top < 0:
            raise ValueError(f"--top must be non-negative, got {args.top}")
        found = found[: args.top]
    sys.stdout.write(paths_to_table(found, store))
    return EXIT_OK


def _cmd_tree(args: argparse.Namespace) -> int:
    directory = _store_dir(args)
    with _locked(directory, exclusive=False):
        store = _open_store(directory, must_exist=True)
    build = build_forward_tree if args.direction == "forward" else build_backward_tree
    tree = build(store, args.root)
    wrote = False
    if args.dot:
        Path(args.dot).write_text(tree_to_dot(tree), encoding="utf-8")
        wrote = True
    if args.json:
        Path(args.json).write_text(tree_to_structured(tree), encoding="utf-8")
        wrote = True
    if not wrote:
        sys.stdout.write(tree_to_structured(tree))
    return EXIT_OK


def _cmd_top(args: argparse.Namespace) -> int:
    directory = _store_dir(args)
    with _locked(directory, exclusive=False):
        store = _open_store(directory, must_exist=True)
    _warn_if_stale(store)
    if args.what == "endpoints":
        records, _ = store.top_endpoints_by_ets(args.k)
        for record in records:
            print(
                f"{record.pair.source} -> {record.pair.destination}"
                f"  ets={format_score(record.ets)}  alerts={len(record.alerts)}"
            )
    elif args.what == "paths":
        records, _ = store.top_paths_by_pts(args.k)
        sys.stdout.write(paths_to_table(records, store))
    else:
        for tree in top_trees(store, args.k, args.direction):
            best = max((n.ets for n in tree.nodes() if n.ets is not None), default=0.0)
            print(
                f"root={tree.root.label}  direction={tree.direction}"
                f"  nodes={len(tree.nodes())}  max_ets={format_score(best)}"
                f"  root_color={color_hex(tree.root.color)}"
            )
    return EXIT_OK


def _cmd_stats(args: argparse.Namespace) -> int:
    directory = _store_dir(args)
    with _locked(directory, exclusive=False):
        store = _open_store(directory, must_exist=True)
    stats = store.stats()
    print(
        json.dumps(
            {
                "nodes": stats.node_count,
                "endpoints": stats.endpoint_count,
                "alerts": stats.alert_count,
                "paths": stats.path_count,
                "scores_stale": store.scores_stale,
            },
            sort_keys=True,
        )
    )
    return EXIT_OK


def _cmd_snapshot(args: argparse.Namespace) -> int:
    directory = _store_dir(args)
    with _locked(directory, exclusive=False):
        store = _open_store(directory, must_exist=True)
    store.snapshot(args.output)
    print(json.dumps({"written": str(args.output)}, sort_keys=True))
    return EXIT_OK


def _cmd_load(args: argparse.Namespace) -> int:
    directory = _store_dir(args)
    with _locked(directory, exclusive=True):
        store = AlertStore()
        store.load(args.input)
        _save_store(store, directory)
    stats = store.stats()
    print(
        json.dumps(
            {"alerts": stats.alert_count, "paths": stats.path_count}, sort_keys=True
        )
    )
    return EXIT_OK


def _cmd_bench(args: argparse.Namespace) -> int:
    report = bench.verify_complexity_tables(args.n)
    if report.ok:
        print(f"endpoints={report.endpoints} paths={report.paths} OK")
        return EXIT_OK
    print(f"endpoints={report.endpoints} paths={report.paths} MISMATCH")
    for failure in report.failures:
        print(failure, file=sys.stderr)
    return EXIT_ERROR


def _progress(done: int) -> None:
    print(f"processed {done} alerts", file=sys.stderr)


if __name__ == "__main__":
    raise SystemExit(main())
