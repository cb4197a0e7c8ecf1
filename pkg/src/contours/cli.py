"""Command-line runner for the verification suites."""

from __future__ import annotations

import argparse
import re
import sys
from typing import Optional, Sequence

from .cascade import CascadeError, parse_schema
from .suites import SUITES, SuiteConfig, format_records, format_text, run_suite


def load_schemas(path: str):
    """One schema per non-blank line; '#' starts a comment line."""
    out = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            text = line.strip()
            if not text or text.startswith("#"):
                continue
            try:
                out.append(parse_schema(text))
            except CascadeError as e:
                m = re.search(r"column (\d+)", str(e))
                col = int(m.group(1)) + (len(line) - len(line.lstrip())) if m else 1
                msg = str(e).split(" at column")[0]
                raise ValueError(f"{path}:{lineno}:{col}: {msg}") from None
    return tuple(out)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="contours", description=__doc__)
    p.add_argument("--suite", nargs="*", metavar="ID",
                   help=f"suites to run (default: all). Known: {', '.join(SUITES)}")
    p.add_argument("--max-rank", type=int, default=3)
    p.add_argument("--width", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=1000)
    p.add_argument("--format", choices=("text", "records"), default="text")
    p.add_argument("--out", metavar="PATH")
    p.add_argument("--schemas", metavar="PATH",
                   help="file of schemas to use instead of the built-in family")
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    suites = tuple(SUITES) if args.suite is None else tuple(args.suite)
    try:
        cfg = SuiteConfig(suites, args.max_rank, args.width, args.seed, args.budget,
                          load_schemas(args.schemas) if args.schemas else ())
    except (ValueError, OSError) as e:
        print(f"contours: {e}", file=sys.stderr)
        return 2
    records = run_suite(cfg)
    text = format_records(records, cfg) if args.format == "records" else format_text(records, cfg)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 1 if any(r.verdict == "fail" for r in records) else 0


if __name__ == "__main__":
    sys.exit(main())
