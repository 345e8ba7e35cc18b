"""Deterministic fan-out: results always come back in input order, so a
run with 8 workers is byte-identical to a sequential one.  Only pure
exact-integer work is ever dispatched here; the high-precision float
context is global and stays on the calling thread."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor


def ordered_map(fn, items, threads: int = 1) -> list:
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))
