"""Append-only, line-delimited result cache for factorizations and class numbers.

The file format is one JSON object per line: {"key": ..., "value": ..., "v": 1}.
Keys are canonical strings ("factor:<n>" or "h:<disc>"); values are canonical
decimal-string encodings so entries are diff-friendly and version-stable.
Corrupt lines are skipped with a warning instead of aborting, which keeps a
cache usable after a crash mid-write.

The cache is opt-in: nothing in the library touches it unless a ``ResultCache``
has been installed with ``activate()`` (the CLI does this when --cache or
QUADCLASS_CACHE is given).  Cached values always equal fresh recomputation;
``sample_keys`` supports the CLI's --verify-cache spot check.
"""

from __future__ import annotations

import json
import sys
import threading

CACHE_VERSION = 1

_active: "ResultCache | None" = None
_active_lock = threading.Lock()


def active() -> "ResultCache | None":
    return _active


def activate(cache: "ResultCache | None") -> None:
    global _active
    with _active_lock:
        _active = cache


def encode_factorization(sign: int, factors) -> str:
    body = ",".join(f"{p}^{e}" for p, e in factors)
    return f"{'+' if sign > 0 else '-'}1:{body}"


def decode_factorization(text: str):
    head, _, body = text.partition(":")
    sign = 1 if head == "+1" else -1 if head == "-1" else None
    if sign is None:
        raise ValueError(f"bad factorization encoding {text!r}")
    factors = []
    if body:
        for part in body.split(","):
            p, _, e = part.partition("^")
            factors.append((int(p), int(e)))
    return sign, tuple(factors)


class ResultCache:
    """File-backed cache with a single serialized writer."""

    def __init__(self, path: str):
        self.path = path
        self._data: dict[str, str] = {}
        self._lock = threading.Lock()
        self._load()
        self._fh = open(path, "a", encoding="utf-8")

    def _load(self) -> None:
        try:
            fh = open(self.path, "r", encoding="utf-8")
        except FileNotFoundError:
            return
        with fh:
            for lineno, line in enumerate(fh, 1):
                line = line.strip()
                if not line:
                    continue
                try:
                    obj = json.loads(line)
                    key, value = obj["key"], obj["value"]
                    if obj.get("v") != CACHE_VERSION:
                        raise ValueError("version mismatch")
                    if not isinstance(key, str) or not isinstance(value, str):
                        raise ValueError("bad types")
                except (ValueError, KeyError, TypeError):
                    print(
                        f"warning: skipping corrupt cache line {lineno} in {self.path}",
                        file=sys.stderr,
                    )
                    continue
                self._data[key] = value

    def close(self) -> None:
        with self._lock:
            self._fh.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()

    def __len__(self) -> int:
        return len(self._data)

    def _get(self, key: str) -> str | None:
        return self._data.get(key)

    def _put(self, key: str, value: str) -> None:
        with self._lock:
            if key in self._data:
                return
            self._data[key] = value
            line = json.dumps(
                {"key": key, "value": value, "v": CACHE_VERSION},
                sort_keys=True,
                separators=(",", ":"),
            )
            self._fh.write(line + "\n")
            self._fh.flush()

    # -- typed accessors ----------------------------------------------------

    def get_factor(self, n: int):
        raw = self._get(f"factor:{n}")
        if raw is None:
            return None
        try:
            return decode_factorization(raw)
        except ValueError:
            return None

    def put_factor(self, n: int, sign: int, factors) -> None:
        self._put(f"factor:{n}", encode_factorization(sign, factors))

    def get_h(self, disc: int) -> int | None:
        raw = self._get(f"h:{disc}")
        if raw is None:
            return None
        try:
            return int(raw)
        except ValueError:
            return None

    def put_h(self, disc: int, h: int) -> None:
        self._put(f"h:{disc}", str(h))

    def sample_keys(self, count: int, rng) -> list[str]:
        keys = sorted(self._data)
        if len(keys) <= count:
            return keys
        return sorted(rng.sample(keys, count))
