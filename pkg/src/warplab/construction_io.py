"""Serialization of oscillating constructions to a structured text file.

The file stores the generating parameters plus every derived junction
radius and bridge constant in mantissa/exponent string form; the loader
rebuilds from parameters and cross-checks the stored values (1e-12
relative), so a certified construction reloads exactly or fails loudly.
"""

import json

import mpmath

from .ladder import OscillationParams, mantissa_exponent
from .smoothing import SmoothedH, build_oscillating_h

FORMAT = "warplab-construction v1"


def save_construction(path: str, params: OscillationParams, ladder, sm: SmoothedH):
    doc = {
        "format": FORMAT,
        "alpha": params.alpha,
        "beta": params.beta,
        "A": params.A,
        "B": params.B,
        "R11": params.R11,
        "periods": params.periods,
        "radius_bound": ladder.radius_bound,
        "truncated": ladder.truncated,
        "cutoff_fracs": {
            "above": [1.01, 1.1, 1.19],
            "below": [0.81, 0.9, 0.99],
        },
        "rows": [
            {f"R{j}": mantissa_exponent(x) for j, x in enumerate(
                (row.R0, row.R1, row.R2, row.R3, row.R4)) if x is not None}
            for row in ladder.rows
        ],
        "junction_constants": [
            {"p": seg.p, "C": mantissa_exponent(seg.C), "kind": seg.kind}
            for seg in sm.base.segments
        ],
    }
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")


def load_construction(path: str, check: bool = False):
    """Rebuild (params, ladder, piecewise, smoothed) and verify stored radii."""
    with open(path) as fh:
        doc = json.load(fh)
    if doc.get("format") != FORMAT:
        raise ValueError(f"not a construction file: {path}")
    params = OscillationParams(
        alpha=doc["alpha"], beta=doc["beta"], A=doc["A"], B=doc["B"],
        R11=doc["R11"], periods=doc["periods"],
    )
    ladder, hp, sm = build_oscillating_h(
        params, radius_bound=doc.get("radius_bound", 1e300), check=check
    )
    with mpmath.workdps(30):
        for row, stored in zip(ladder.rows, doc["rows"]):
            for j, x in enumerate((row.R0, row.R1, row.R2, row.R3, row.R4)):
                key = f"R{j}"
                if x is None or key not in stored:
                    continue
                ref = mpmath.mpf(stored[key])
                if ref != 0 and abs(x - ref) > mpmath.mpf("1e-12") * abs(ref):
                    raise ValueError(
                        f"stored radius {key}={stored[key]} disagrees with rebuild"
                    )
    return params, ladder, hp, sm
