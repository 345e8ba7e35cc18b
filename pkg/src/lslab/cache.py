"""On-disk triangle cache.

A cache file is JSON-lines: a header with schema version, family tag and
a sha256 over the data lines, followed by one {"n":…,"j":…,"value":"…"}
object per entry, row-major, values as decimal strings.  A file whose
hash does not match raises CacheCorruptionError; callers are expected to
fall back to recomputation (the CLI does, and reports it via its exit
code)."""

from __future__ import annotations

import hashlib
import json
import os
from fractions import Fraction
from pathlib import Path

from .errors import CacheCorruptionError
from .triangles import GammaParam, format_entry, iter_triangle

SCHEMA_VERSION = 1
ENV_CACHE_DIR = "LSLAB_CACHE_DIR"


def resolve_cache_dir(explicit) -> Path:
    env = os.environ.get(ENV_CACHE_DIR)
    if env:
        return Path(env)
    if explicit:
        return Path(explicit)
    return Path.home() / ".cache" / "lslab"


def _gamma_tag(gamma: GammaParam) -> str:
    if gamma.family:
        return gamma.family
    v = gamma.value
    return f"g{v.numerator}-{v.denominator}"


def cache_path(cache_dir: Path, gamma: GammaParam, n_max: int) -> Path:
    return Path(cache_dir) / f"triangle_{_gamma_tag(gamma)}_n{n_max}.jsonl"


def _data_lines(gamma: GammaParam, n_max: int) -> list[str]:
    return [
        json.dumps({"n": n, "j": j, "value": format_entry(v)})
        for n, j, v in iter_triangle(gamma, n_max)
    ]


def _digest(lines: list[str]) -> str:
    h = hashlib.sha256()
    for line in lines:
        h.update(line.encode())
        h.update(b"\n")
    return h.hexdigest()


def write_cache(path: Path, gamma: GammaParam, n_max: int) -> list[str]:
    lines = _data_lines(gamma, n_max)
    header = json.dumps(
        {
            "schema": SCHEMA_VERSION,
            "family": gamma.family or "jacobi",
            "gamma": str(gamma.value),
            "n_max": n_max,
            "sha256": _digest(lines),
        }
    )
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as fp:
        fp.write(header + "\n")
        for line in lines:
            fp.write(line + "\n")
    return lines


def read_cache(path: Path, gamma: GammaParam, n_max: int) -> list[str] | None:
    """Data lines from a compatible cache file; None when absent or
    version/parameter incompatible; CacheCorruptionError on a bad hash."""
    if not path.exists():
        return None
    with open(path) as fp:
        raw = fp.read().splitlines()
    if not raw:
        return None
    try:
        header = json.loads(raw[0])
    except json.JSONDecodeError:
        raise CacheCorruptionError(f"unreadable header in {path}")
    if (
        header.get("schema") != SCHEMA_VERSION
        or header.get("gamma") != str(gamma.value)
        or header.get("n_max") != n_max
    ):
        return None
    lines = raw[1:]
    if _digest(lines) != header.get("sha256"):
        raise CacheCorruptionError(f"content hash mismatch in {path}")
    return lines


def load_or_build(gamma: GammaParam, n_max: int, cache_dir: Path):
    """(data lines, from_cache, was_corrupted); corrupted files are rebuilt
    and rewritten in place."""
    path = cache_path(cache_dir, gamma, n_max)
    try:
        cached = read_cache(path, gamma, n_max)
    except CacheCorruptionError:
        lines = write_cache(path, gamma, n_max)
        return lines, False, True
    if cached is not None:
        return cached, True, False
    return write_cache(path, gamma, n_max), False, False


def lines_to_entries(lines: list[str]):
    for line in lines:
        obj = json.loads(line)
        text = obj["value"]
        value = Fraction(text) if "/" in text else int(text)
        yield obj["n"], obj["j"], value
