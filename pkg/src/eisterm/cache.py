"""Persistent cache for expensive structure computations (class groups,
unit data).  Entries are JSON files keyed by (command family, D, N, version)
with a checksum; writes are atomic (write-then-rename); version mismatch or
corruption invalidates the entry.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile

ARTIFACT_VERSION = "1.0.0"


class CacheError(RuntimeError):
    pass


def _key_name(family: str, D, N, version: str) -> str:
    d = "Q" if D is None else str(D)
    return f"{family}__D{d}__N{N}__v{version}.json"


def _checksum(payload_text: str) -> str:
    return hashlib.sha256(payload_text.encode("utf-8")).hexdigest()


def cache_get_or_compute(cache_dir: str | None, family: str, D, N, compute,
                         bypass: bool = False, version: str = ARTIFACT_VERSION):
    """Returns (payload, cache_hit, warning).  compute() must return a
    JSON-serializable payload; byte-identical on identical inputs."""
    if bypass or cache_dir is None:
        return compute(), False, None
    os.makedirs(cache_dir, exist_ok=True)
    if not os.access(cache_dir, os.W_OK):
        raise CacheError(f"cache directory not writable: {cache_dir}")
    path = os.path.join(cache_dir, _key_name(family, D, N, version))
    warning = None
    if os.path.exists(path):
        try:
            with open(path, "r", encoding="utf-8") as fh:
                wrapper = json.load(fh)
            text = json.dumps(wrapper["payload"], sort_keys=True)
            if wrapper.get("version") != version:
                warning = "version mismatch; recomputing"
            elif _checksum(text) != wrapper.get("checksum"):
                warning = "checksum mismatch; recomputing"
            else:
                return wrapper["payload"], True, None
        except (json.JSONDecodeError, KeyError, OSError):
            warning = "corrupted cache entry; recomputing"
    payload = compute()
    text = json.dumps(payload, sort_keys=True)
    wrapper = {"version": version, "checksum": _checksum(text), "payload": payload}
    fd, tmp = tempfile.mkstemp(dir=cache_dir, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            json.dump(wrapper, fh, sort_keys=True)
        os.replace(tmp, path)
    except OSError:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return payload, False, warning
