"""Benchmark Step-4 solution generation against ground-truth texts.

Scores mean embedding cosine similarity between generated solutions and
each case's published solution, per ground-truth principle. Offline run
against the committed fixtures:

    python scripts/run_solution_eval.py \
        --replay tests/golden/transcripts --strategies few-shot \
        --models gpt-4 --out /tmp/step4

Live runs need OPENAI_API_KEY and record transcripts under --storage.
Companion to run_contradiction_eval.py; same output layout with
violin.csv instead of dots.csv.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(REPO / "src"))

from triz_workbench.cases import load_collection, seed_cases  # noqa: E402
from triz_workbench.config import GatewayConfig, StorageConfig  # noqa: E402
from triz_workbench.evaluation import (  # noqa: E402
    export_plot_data,
    export_report,
    format_summary_table,
    run_solution_eval,
)
from triz_workbench.gateway import Gateway  # noqa: E402


def parse_args() -> argparse.Namespace:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--collection", default="seeds",
                    help="'seeds' or a collection JSON file")
    ap.add_argument("--models", nargs="+", default=None)
    ap.add_argument("--strategies", nargs="+", default=None,
                    help="subset of: basic cot few-shot cot-few-shot")
    ap.add_argument("--per-principle-count", type=int, default=3)
    ap.add_argument("--aggregation", default="macro", choices=["macro", "micro"])
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--replay", type=Path, default=None,
                    help="transcript directory; no network when set")
    ap.add_argument("--storage", type=Path, default=Path("workbench_data"),
                    help="live runs record transcripts here")
    ap.add_argument("--out", type=Path, required=True)
    return ap.parse_args()


def main() -> None:
    args = parse_args()
    cases = seed_cases() if args.collection == "seeds" else load_collection(
        Path(args.collection)
    )
    if args.replay is not None:
        gateway = Gateway.replay(args.replay)
        clock = lambda: 0.0  # noqa: E731  pinned so reruns are byte-stable
    else:
        storage = StorageConfig(root=args.storage)
        gateway = Gateway.live(GatewayConfig()).recording(storage.transcripts_dir)
        clock = time.time

    report = run_solution_eval(
        gateway,
        cases,
        strategies=args.strategies,
        model_ids=args.models,
        per_principle_count=args.per_principle_count,
        aggregation=args.aggregation,
        clock=clock,
        workers=args.workers,
    )

    args.out.mkdir(parents=True, exist_ok=True)
    export_plot_data(report, args.out)
    export_report(report, args.out / "report.json")
    export_report(report, args.out / "report.csv", fmt="csv")
    print(format_summary_table(report))
    if report.errors:
        print(f"{len(report.errors)} case(s) recorded errors; see report.json")
    print(f"report written to {args.out}")


if __name__ == "__main__":
    main()
