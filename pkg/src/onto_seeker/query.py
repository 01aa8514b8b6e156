"""Keyword search over a loaded index.

Scoring: sum over matched (token, field) postings of w(field) * (1 + ln tf),
with weights class=3, property=2, relation=1. Matching is exact on tokens, so
a keyword equal to any class/property/relation name always hits the documents
that declare it. Ties are broken by URL so output is totally ordered.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import OntoSeekerError
from .indexer import FIELDS, FIELD_WEIGHTS, Index
from .rdf import tokenize


class EmptyQuery(OntoSeekerError):
    pass


class UnknownUrl(OntoSeekerError):
    pass


@dataclass(frozen=True)
class Query:
    raw: str
    tokens: tuple[str, ...]


@dataclass(frozen=True)
class QueryResult:
    url: str
    score: float
    matched: dict[str, frozenset[str]]

    def matched_detail(self) -> str:
        parts = []
        for field_name in FIELDS:
            tokens = self.matched.get(field_name)
            if tokens:
                parts.append(f"{field_name}:{','.join(sorted(tokens))}")
        return ";".join(parts)


def parse_query(raw: str) -> Query:
    """Whitespace-split keywords, tokenize each, dedup keeping first occurrence."""
    tokens: list[str] = []
    for keyword in raw.split():
        for token in tokenize(keyword):
            if token not in tokens:
                tokens.append(token)
    if not tokens:
        raise EmptyQuery(f"no searchable tokens in {raw!r}")
    return Query(raw=raw, tokens=tuple(tokens))


def _contribution(field_name: str, tf: int) -> float:
    return FIELD_WEIGHTS[field_name] * (1.0 + math.log(tf))


def search(index: Index, query: Query, top_k: int, match_all: bool = False) -> list[QueryResult]:
    """Rank documents matching any query token (all tokens with match_all).

    Results are sorted by score descending, then URL ascending, and capped at
    top_k. Accumulation order is token-major then field-major, which keeps
    scores bit-identical with the brute-force scan oracle.
    """
    if not query.tokens:
        raise EmptyQuery("query has no tokens")
    if top_k < 1:
        raise ValueError("top_k must be >= 1")
    scores: dict[int, float] = {}
    matched: dict[int, dict[str, set[str]]] = {}
    token_hits: dict[int, set[str]] = {}
    for token in query.tokens:
        for field_name in FIELDS:
            for posting in index.postings_by_token_field.get((token, field_name), ()):
                scores[posting.doc_id] = scores.get(posting.doc_id, 0.0) + _contribution(
                    field_name, posting.tf
                )
                matched.setdefault(posting.doc_id, {}).setdefault(field_name, set()).add(token)
                token_hits.setdefault(posting.doc_id, set()).add(token)
    results = []
    for doc_id, score in scores.items():
        if match_all and token_hits[doc_id] != set(query.tokens):
            continue
        results.append(
            QueryResult(
                url=index.docs[doc_id].url,
                score=score,
                matched={f: frozenset(toks) for f, toks in matched[doc_id].items()},
            )
        )
    results.sort(key=lambda r: (-r.score, r.url))
    return results[:top_k]


@dataclass(frozen=True)
class ScoreContribution:
    token: str
    field: str
    tf: int
    contribution: float


def explain(index: Index, query: Query, url: str) -> list[ScoreContribution]:
    """Per-(token, field) contributions for one document; they sum to the
    exact score search() assigns it."""
    doc = index.doc_by_url.get(url)
    if doc is None:
        raise UnknownUrl(url)
    contributions = []
    for token in query.tokens:
        for field_name in FIELDS:
            for posting in index.postings_by_token_field.get((token, field_name), ()):
                if posting.doc_id == doc.doc_id:
                    contributions.append(
                        ScoreContribution(
                            token=token,
                            field=field_name,
                            tf=posting.tf,
                            contribution=_contribution(field_name, posting.tf),
                        )
                    )
    return contributions


def format_results(results: list[QueryResult], machine: bool = False) -> list[str]:
    """One line per hit: rank<TAB>score(6dp)<TAB>url, plus matched detail in
    machine mode."""
    lines = []
    for rank, result in enumerate(results, start=1):
        line = f"{rank}\t{result.score:.6f}\t{result.url}"
        if machine:
            line += f"\t{result.matched_detail()}"
        lines.append(line)
    return lines


def format_explain(contributions: list[ScoreContribution]) -> list[str]:
    lines = [
        f"{c.token} {c.field} tf={c.tf} contrib={c.contribution:.6f}" for c in contributions
    ]
    total = 0.0
    for c in contributions:  # same accumulation order as search, so totals agree exactly
        total += c.contribution
    lines.append(f"total {total:.6f}")
    return lines
