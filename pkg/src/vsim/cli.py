"""Operator command line: serve, analogy, nn, ingest, query, bench.

Exit codes: 0 success, 1 runtime error (message on stderr), 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

import numpy as np

from .embeddings import load_model, read_header
from .errors import UnvectorizableText, VsimError
from .index import STATUS_FACT_CHECKED, STATUSES, DocumentRecord, VectorIndex
from .service import ClaimMatchingService, ServiceConfig
from .vectorize import embed_text


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vsim",
        description="Vector-similarity claim matching: model queries, "
        "bulk ingestion, search, serving and benchmarks.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    serve = sub.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--model", help="falls back to VSIM_MODEL_PATH")
    serve.add_argument("--index", help="falls back to VSIM_INDEX_PATH")
    serve.add_argument("--journal")
    serve.add_argument("--port", type=int)
    serve.add_argument("--threshold", type=float)
    serve.add_argument("--k", type=int, dest="suggestion_k")
    serve.add_argument("--callback-url")
    serve.add_argument("--ui-origin")
    serve.add_argument("--host", default="0.0.0.0")

    analogy = sub.add_parser("analogy", help="a:b :: c:? over the vocabulary")
    analogy.add_argument("--model", required=True)
    analogy.add_argument("-k", type=int, default=10)
    analogy.add_argument("a")
    analogy.add_argument("b")
    analogy.add_argument("c")

    nn = sub.add_parser("nn", help="nearest vocabulary words")
    nn.add_argument("--model", required=True)
    nn.add_argument("-k", type=int, default=10)
    nn.add_argument("word")

    ingest = sub.add_parser("ingest", help="bulk-load a JSON-lines file")
    ingest.add_argument("--model", required=True)
    ingest.add_argument("--index", required=True)
    ingest.add_argument("file")

    query = sub.add_parser("query", help="search the index for similar texts")
    query.add_argument("--model", required=True)
    query.add_argument("--index", required=True)
    query.add_argument("-k", type=int, default=10)
    query.add_argument("--threshold", type=float, default=-1.0)
    query.add_argument("--status", choices=STATUSES)
    query.add_argument("text")

    bench = sub.add_parser("bench", help="exact-scan latency benchmark")
    bench.add_argument("--model", required=True)
    bench.add_argument("--index", required=True)
    bench.add_argument("--docs", type=int, default=100_000)
    bench.add_argument("--dim", type=int)
    bench.add_argument("--queries", type=int, default=1000)
    bench.add_argument("--k", type=int, default=10)
    bench.add_argument("--workers", type=int, default=1)
    bench.add_argument("--seed", type=int, default=0)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.subcommand](args)
    except VsimError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


def cmd_serve(args) -> int:
    import os

    import uvicorn

    from .api import create_app

    model = args.model or os.environ.get("VSIM_MODEL_PATH")
    index = args.index or os.environ.get("VSIM_INDEX_PATH")
    if not model or not index:
        missing = "--model" if not model else "--index"
        print(
            f"usage error: {missing} is required "
            f"(or set VSIM_{'MODEL' if not model else 'INDEX'}_PATH)",
            file=sys.stderr,
        )
        return 2
    journal = (
        args.journal
        or os.environ.get("VSIM_JOURNAL_PATH")
        or f"{index}.journal"
    )
    config = ServiceConfig.from_env(
        model_path=model,
        index_path=index,
        journal_path=journal,
        port=args.port,
        suggestion_threshold=args.threshold,
        suggestion_k=args.suggestion_k,
        callback_url=args.callback_url,
        ui_origin=args.ui_origin,
    )
    service = ClaimMatchingService(config)
    app = create_app(service)
    uvicorn.run(app, host=args.host, port=config.port, log_level="info")
    return 0


def cmd_analogy(args) -> int:
    model = load_model(args.model)
    for scored in model.analogy(args.a, args.b, args.c, args.k):
        print(f"{scored.word}\t{scored.score:.4f}")
    return 0


def cmd_nn(args) -> int:
    model = load_model(args.model)
    row = model.lookup(args.word)
    if row is None:
        print(f"error: {args.word!r} is not in the vocabulary", file=sys.stderr)
        return 1
    for scored in model.nearest_words(row, args.k, exclude={args.word}):
        print(f"{scored.word}\t{scored.score:.4f}")
    return 0


def cmd_ingest(args) -> int:
    import os

    model = load_model(args.model)
    if os.path.exists(args.index):
        index = VectorIndex.load_snapshot(args.index)
    else:
        index = VectorIndex(model.dim)
    inserted = replaced = 0
    skipped: dict[str, int] = {}
    with open(args.file, "r", encoding="utf-8") as f:
        for line_no, line in enumerate(f, 1):
            line = line.strip()
            if not line:
                continue
            try:
                row = json.loads(line)
            except json.JSONDecodeError:
                _count_skip(skipped, "InvalidJson", line_no)
                continue
            if not isinstance(row, dict) or "id" not in row or "text" not in row:
                _count_skip(skipped, "MissingField", line_no)
                continue
            status = row.get("status", STATUS_FACT_CHECKED)
            if status not in STATUSES:
                _count_skip(skipped, "InvalidStatus", line_no)
                continue
            try:
                doc = embed_text(model, row["text"])
                outcome = index.upsert(
                    DocumentRecord(
                        id=str(row["id"]),
                        vector=doc.values,
                        text=row["text"],
                        status=status,
                        metadata=row.get("metadata", {}),
                    )
                )
            except UnvectorizableText as e:
                _count_skip(skipped, type(e).__name__, line_no)
                continue
            except (VsimError, ValueError) as e:
                _count_skip(skipped, type(e).__name__, line_no)
                continue
            if outcome == "inserted":
                inserted += 1
            else:
                replaced += 1
    index.save_snapshot(args.index)
    print(f"ingested\t{inserted + replaced}")
    print(f"inserted\t{inserted}")
    print(f"replaced\t{replaced}")
    print(f"skipped\t{sum(skipped.values())}")
    for reason in sorted(skipped):
        print(f"skipped[{reason}]\t{skipped[reason]}")
    print(f"documents\t{index.stats().document_count}")
    return 0


def cmd_query(args) -> int:
    model = load_model(args.model)
    index = VectorIndex.load_snapshot(args.index)
    doc = embed_text(model, args.text)
    hits = index.search(doc.values, k=args.k, threshold=args.threshold,
                        status_filter=args.status)
    for hit in hits:
        text = hit.text.replace("\t", " ").replace("\n", " ")
        print(f"{hit.id}\t{hit.score:.4f}\t{text}")
    return 0


def cmd_bench(args) -> int:
    if args.dim is not None:
        dim = args.dim
    else:
        _, dim = read_header(args.model)

    rng = np.random.default_rng(args.seed)
    index = VectorIndex(dim)
    print(f"indexing {args.docs} random unit vectors (dim {dim})...", file=sys.stderr)
    batch = 10_000
    made = 0
    while made < args.docs:
        n = min(batch, args.docs - made)
        block = rng.standard_normal((n, dim)).astype(np.float32)
        block /= np.linalg.norm(block.astype(np.float64), axis=1, keepdims=True).astype(
            np.float32
        )
        for i in range(n):
            index.upsert(
                DocumentRecord(id=f"doc{made + i:08d}", vector=block[i], text="")
            )
        made += n

    queries = rng.standard_normal((args.queries, dim))
    queries /= np.linalg.norm(queries, axis=1, keepdims=True)

    latencies = np.empty(args.queries, dtype=np.float64)

    def run_range(start: int, stop: int) -> None:
        for qi in range(start, stop):
            t0 = time.perf_counter()
            index.search(queries[qi], k=args.k)
            latencies[qi] = time.perf_counter() - t0

    wall_start = time.perf_counter()
    if args.workers <= 1:
        run_range(0, args.queries)
    else:
        import threading

        bounds = np.linspace(0, args.queries, args.workers + 1).astype(int)
        threads = [
            threading.Thread(target=run_range, args=(bounds[w], bounds[w + 1]))
            for w in range(args.workers)
        ]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
    wall = time.perf_counter() - wall_start

    ms = latencies * 1000.0
    print(f"docs\t{args.docs}")
    print(f"dim\t{dim}")
    print(f"queries\t{args.queries}")
    print(f"workers\t{args.workers}")
    print(f"p50_ms\t{np.percentile(ms, 50):.3f}")
    print(f"p95_ms\t{np.percentile(ms, 95):.3f}")
    print(f"p99_ms\t{np.percentile(ms, 99):.3f}")
    print(f"qps\t{args.queries / wall:.1f}")
    return 0


def _count_skip(skipped: dict[str, int], reason: str, line_no: int) -> None:
    skipped[reason] = skipped.get(reason, 0) + 1
    print(f"skip line {line_no}: {reason}", file=sys.stderr)


_COMMANDS = {
    "serve": cmd_serve,
    "analogy": cmd_analogy,
    "nn": cmd_nn,
    "ingest": cmd_ingest,
    "query": cmd_query,
    "bench": cmd_bench,
}


if __name__ == "__main__":
    sys.exit(main())
