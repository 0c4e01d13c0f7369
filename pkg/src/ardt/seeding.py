"""Deterministic seed substreams.

Every randomized operation in the package draws from a seed derived from one
root seed plus a path of names (e.g. fold, resample, prune-split). Derivation
goes through SHA-256 so that adding a method or dataset to a run never shifts
the draws of the others.
"""

import hashlib


def derive_seed(root: int, *parts) -> int:
    """Derive a 63-bit child seed from a root seed and a name path."""
    key = "/".join([str(int(root)), *[str(p) for p in parts]])
    digest = hashlib.sha256(key.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "little") >> 1
