#!/usr/bin/env python3
"""End-to-end demo: generate a synthetic site on disk, crawl it, index the
collected ontology URLs, and answer a few keyword queries.

Usage: python scripts/demo_pipeline.py [workdir]
"""

from __future__ import annotations

import json
import sys
import tempfile
from pathlib import Path

from onto_seeker.cli import main as cli


def main() -> int:
    workdir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(tempfile.mkdtemp(prefix="onto-demo-"))
    site = workdir / "site"
    urls = workdir / "urls.txt"
    index_dir = workdir / "index"

    print(f"== workdir {workdir}")
    code = cli(["gen-corpus", "--seed", "42", "--pages", "150", "--ontologies", "20",
                "--hosts", "2", "--out-dir", str(site)])
    if code:
        return code
    root_url = json.loads((site / "site.json").read_text())["root_url"]

    print("\n== crawl")
    code = cli(["crawl", "--corpus-dir", str(site), "--seed-url", root_url,
                "--max-pages", "500", "--politeness-ms", "0", "--workers", "4",
                "--out", str(urls)])
    if code:
        return code

    print("\n== index")
    code = cli(["index", "--urls", str(urls), "--index-dir", str(index_dir),
                "--corpus-dir", str(site), "--politeness-ms", "0",
                "--created-at", "2026-01-01T00:00:00Z"])
    if code:
        return code

    for keyword in ("sensor", "agent organization", "hasMarket"):
        print(f"\n== query {keyword!r}")
        code = cli(["query", "--index-dir", str(index_dir), "--query", keyword,
                    "--top-k", "5", "--format", "tsv"])
        if code:
            return code
    return 0


if __name__ == "__main__":
    sys.exit(main())
