"""Crawler bench runner: one row per (workers, max_pages) cell, recording
how many ontologies were found and how long the crawl took."""

from __future__ import annotations

import tempfile
from dataclasses import dataclass
from pathlib import Path

from ..crawler import CrawlConfig, crawl
from ..netfetch import Url
from .corpus import CorpusTransport
from .synth import SiteSpec, make_synthetic_site

BENCH_HEADER = ("workers", "max_pages", "ontologies_found", "elapsed_ms")


@dataclass(frozen=True)
class BenchRow:
    workers: int
    max_pages: int
    ontologies_found: int
    elapsed_ms: int


def run_bench(
    matrix: list[tuple[int, int]],
    spec: SiteSpec,
    politeness_ms: int = 0,
    max_depth: int = -1,
) -> list[BenchRow]:
    """Generate the corpus per cell, crawl it, and record the Table-shaped row.

    Cells run sequentially for stable timing. Politeness defaults to 0 so the
    bench measures traversal and latency overlap rather than the gate.
    """
    if not matrix:
        raise ValueError("bench matrix must be non-empty")
    rows: list[BenchRow] = []
    for workers, max_pages in matrix:
        corpus, ground_truth = make_synthetic_site(spec)
        transport = CorpusTransport(corpus)
        with tempfile.TemporaryDirectory(prefix="onto-seeker-bench-") as tmp:
            config = CrawlConfig(
                seed_urls=(Url.parse(ground_truth.root_url),),
                max_pages=max_pages,
                max_depth=max_depth,
                worker_count=workers,
                politeness_ms=politeness_ms,
                output_path=str(Path(tmp) / "urls.txt"),
            )
            report = crawl(config, transport)
        rows.append(
            BenchRow(
                workers=workers,
                max_pages=max_pages,
                ontologies_found=report.ontologies_found,
                elapsed_ms=report.elapsed_ms,
            )
        )
    return rows


def render_bench_tsv(rows: list[BenchRow]) -> str:
    lines = ["\t".join(BENCH_HEADER)]
    for row in rows:
        lines.append(f"{row.workers}\t{row.max_pages}\t{row.ontologies_found}\t{row.elapsed_ms}")
    return "\n".join(lines)


def render_bench_table(rows: list[BenchRow]) -> str:
    cells = [BENCH_HEADER] + [
        (str(r.workers), str(r.max_pages), str(r.ontologies_found), str(r.elapsed_ms))
        for r in rows
    ]
    widths = [max(len(row[col]) for row in cells) for col in range(len(BENCH_HEADER))]
    return "\n".join(
        "  ".join(value.rjust(width) for value, width in zip(row, widths)) for row in cells
    )
