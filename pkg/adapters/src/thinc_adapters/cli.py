"""The `thinc-adapters` command.

    thinc-adapters extract --texts texts.csv --tools tools.yaml --out corpus.jsonl

Reads texts (CSV: id,text[,label]), runs the configured tools, and
writes channel time series as corpus JSONL. Exit codes: 0 success, 2
anticipated input/config error, 1 bug.
"""

from __future__ import annotations

import argparse
import sys
import traceback

from .errors import AdapterError
from .extract import DEFAULT_MAX_TOKENS, extract_channels
from .spec import read_tools_config
from .textio import read_texts, write_corpus_jsonl

__all__ = ["main", "entrypoint"]


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="thinc-adapters",
        description="turn raw texts into per-token channel time series",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("extract", help="texts + tools config -> corpus JSONL")
    p.add_argument("--texts", required=True, help="CSV with header id,text[,label]")
    p.add_argument("--tools", required=True, help="YAML tools config")
    p.add_argument("--out", required=True, help="output corpus JSONL path")
    p.add_argument(
        "--max-tokens",
        type=int,
        default=DEFAULT_MAX_TOKENS,
        help="per-instance token cap bounding prefix-scoring cost "
        f"(default {DEFAULT_MAX_TOKENS})",
    )
    return parser


def _cmd_extract(args: argparse.Namespace) -> int:
    for path, what in ((args.texts, "texts file"), (args.tools, "tools config")):
        try:
            with open(path, "rb"):
                pass
        except FileNotFoundError:
            raise FileNotFoundError(path) from None
    texts = read_texts(args.texts)
    specs = read_tools_config(args.tools)
    records, report = extract_channels(texts, specs, max_tokens=args.max_tokens)
    write_corpus_jsonl(records, args.out)
    print(
        f"wrote {report.written} of {report.total} instances to {args.out} "
        f"({len(report.channel_names)} channels, token cap {report.max_tokens})"
    )
    if report.skipped_ids:
        print(f"skipped (no tokens): {', '.join(report.skipped_ids)}")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _cmd_extract(args)
    except AdapterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: file not found: {exc}", file=sys.stderr)
        return 2
    except Exception:
        traceback.print_exc()
        return 1


def entrypoint() -> None:
    raise SystemExit(main())
