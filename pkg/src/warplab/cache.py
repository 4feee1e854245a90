"""Line-oriented on-disk cache for orbit distances.

One file per model, keyed by a parameter hash in the header; a hash
mismatch means the file belongs to a different model and is ignored (and
overwritten on the next append), never silently reused.  Records are
`l d_l clairaut_c r_max` with full-precision reprs, so a warm cache
reproduces runs byte-identically.  Writes go through a temp file +
os.replace, which keeps concurrent readers consistent; in-process appends
are serialized by a lock.
"""

import hashlib
import json
import os
import threading

HEADER = "# warplab-orbit-cache v1 model="


def model_hash(payload: dict) -> str:
    blob = json.dumps(payload, sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


def default_cache_dir() -> str:
    env = os.environ.get("WARPLAB_CACHE_DIR")
    if env:
        return env
    return os.path.join(os.path.expanduser("~"), ".cache", "warplab")


class OrbitCache:
    def __init__(self, path: str, model_key: str):
        self.path = path
        self.model_key = model_key
        self._lock = threading.Lock()

    @staticmethod
    def for_model(payload: dict, cache_dir: str | None = None) -> "OrbitCache":
        key = model_hash(payload)
        d = cache_dir or default_cache_dir()
        os.makedirs(d, exist_ok=True)
        return OrbitCache(os.path.join(d, f"orbit_{key}.tsv"), key)

    def load(self) -> dict:
        """Records from disk, or {} when absent or keyed to another model."""
        try:
            with open(self.path) as fh:
                first = fh.readline().rstrip("\n")
                if first != HEADER + self.model_key:
                    return {}
                out = {}
                for line in fh:
                    parts = line.split()
                    if len(parts) != 4:
                        continue
                    out[int(parts[0])] = (float(parts[1]), float(parts[2]), float(parts[3]))
                return out
        except FileNotFoundError:
            return {}

    def append(self, l, d, c, r_max):
        with self._lock:
            existing = self.load()
            existing[int(l)] = (float(d), float(c), float(r_max))
            tmp = self.path + ".tmp"
            with open(tmp, "w") as fh:
                fh.write(HEADER + self.model_key + "\n")
                for key in sorted(existing):
                    dd, cc, rr = existing[key]
                    fh.write(f"{key} {dd!r} {cc!r} {rr!r}\n")
            os.replace(tmp, self.path)
