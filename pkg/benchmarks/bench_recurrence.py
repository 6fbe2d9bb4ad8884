"""Timing comparison of the recurrence kernel backends.

Runs the three-term scan over identical coefficient arrays with the compiled
extension and with the pure-Python twin, and prints per-site cost and the
speedup.  Sizes are small enough to finish in seconds but long enough that
per-call overhead is negligible for the compiled path.

Usage: python3 benchmarks/bench_recurrence.py [--sites N ...] [--repeats K]
"""

import argparse
import time

import numpy as np

from specrange import _recurrence_py

try:
    from specrange import _recurrence as _compiled
except ImportError:
    _compiled = None

RESCALE_AT = 1e150
OVERFLOW_AT = 1e300


def run_once(impl, coeff, normalize):
    vals = np.empty(len(coeff) + 2, dtype=np.complex128)
    scale = np.empty(len(coeff) + 2, dtype=np.float64)
    t0 = time.perf_counter()
    stop = impl(coeff, 1.0 + 0.0j, 0.5 - 0.25j, normalize, RESCALE_AT,
                OVERFLOW_AT, vals, scale)
    return time.perf_counter() - t0, stop, vals


def best_of(impl, coeff, normalize, repeats):
    times = []
    stop, ref = None, None
    for _ in range(repeats):
        dt, stop, vals = run_once(impl, coeff, normalize)
        times.append(dt)
        ref = vals
    return min(times), stop, ref


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sites", type=int, nargs="+",
                        default=[10_000, 100_000, 1_000_000])
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    rng = np.random.default_rng(2026)
    print(f"{'sites':>10}  {'mode':<10}  {'python':>12}  {'compiled':>12}  "
          f"{'speedup':>8}")
    for n in args.sites:
        coeff = (0.3 * rng.standard_normal(n)
                 + 0.1j * rng.standard_normal(n)).astype(np.complex128)
        for normalize in (False, True):
            mode = "normalized" if normalize else "plain"
            t_py, s_py, v_py = best_of(_recurrence_py.three_term_scan, coeff,
                                       normalize, args.repeats)
            if _compiled is None:
                print(f"{n:>10}  {mode:<10}  {t_py * 1e3:>10.2f}ms  "
                      f"{'absent':>12}  {'-':>8}")
                continue
            t_c, s_c, v_c = best_of(_compiled.three_term_scan, coeff,
                                    normalize, args.repeats)
            # an early overflow stop leaves the buffer tail unwritten, so
            # only the computed prefix is comparable
            written = s_py if s_py >= 0 else len(v_py)
            if s_py != s_c or not np.array_equal(v_py[:written],
                                                 v_c[:written]):
                raise SystemExit("backends disagree, benchmark aborted")
            sites = written - 2 if s_py >= 0 else n
            print(f"{n:>10}  {mode:<10}  {t_py * 1e3:>10.2f}ms  "
                  f"{t_c * 1e3:>10.2f}ms  {t_py / t_c:>7.1f}x"
                  + (f"  (overflow stop after {sites} sites)"
                     if s_py >= 0 else ""))


if __name__ == "__main__":
    main()
