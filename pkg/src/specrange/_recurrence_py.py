"""Pure-Python fallback for the three-term recurrence kernel.

Contract (shared with the compiled twin):

    x[0] = x0, x[1] = x1, x[j+1] = coeff[j-1] * x[j] - x[j-1]

out_vals[j] receives x[j] at its storage-time scale, out_scale[j] the
cumulative natural-log factor, so the true value is out_vals[j] * e^out_scale[j].
With normalize=True the active pair is divided by its max magnitude whenever
it exceeds rescale_at (log factor accumulated); otherwise the scan stops at
the first magnitude above overflow_at and returns the index of the first
entry NOT written.  Returns -1 on a complete scan.
"""

from __future__ import annotations

import math


def three_term_scan(coeff, x0, x1, normalize, rescale_at, overflow_at,
                    out_vals, out_scale) -> int:
    m = len(coeff)
    if len(out_vals) != m + 2 or len(out_scale) != m + 2:
        raise ValueError("output buffers must have length len(coeff) + 2")
    a = complex(x0)
    b = complex(x1)
    s = 0.0
    out_vals[0] = a
    out_scale[0] = 0.0
    out_vals[1] = b
    out_scale[1] = 0.0
    cs = [complex(c) for c in coeff]
    for i, c in enumerate(cs):
        nxt = c * b - a
        a = b
        b = nxt
        mag = max(abs(a), abs(b))
        if normalize:
            if mag > rescale_at:
                a /= mag
                b /= mag
                s += math.log(mag)
        elif mag > overflow_at:
            return i + 2
        out_vals[i + 2] = b
        out_scale[i + 2] = s
    return -1
