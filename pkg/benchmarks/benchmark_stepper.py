"""Compare the compiled stepper core against the pure-Python fallback.

Run:  python3 benchmarks/benchmark_stepper.py
"""

import time

from tuberupture import _stepper_py

try:
    from tuberupture import _stepper
except ImportError:
    _stepper = None

CASES = [
    ("secular, eps=0.2 to blow-up", dict(eps=0.2, tau_end=500.0, mode=1)),
    ("secular, eps=0.1 to blow-up", dict(eps=0.1, tau_end=2000.0, mode=1)),
    ("exact driver, tau_end=500", dict(eps=0.2, tau_end=500.0, mode=0)),
]

BASE = dict(
    y0=1.0, z0=0.2, p0=0.0, rel_tol=1e-10, abs_tol=1e-12, h_init=1e-3,
    h_min=1e-12, blowup_threshold=1e6, y_floor=1e-8, dense_stride=0,
)


def run(core, kwargs, repeats=3):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        _, _, code, term_tau, accepted = core(**kwargs)
        best = min(best, time.perf_counter() - t0)
    return best, code, term_tau, accepted


def main():
    if _stepper is None:
        print("compiled extension not built; benchmarking fallback only")
    for label, overrides in CASES:
        kwargs = {**BASE, **overrides}
        t_py, code, tau, steps = run(_stepper_py.integrate_core, kwargs)
        line = f"{label:32s} python {t_py * 1e3:9.1f} ms ({steps} steps, code {code})"
        if _stepper is not None:
            t_c, code_c, tau_c, steps_c = run(_stepper.integrate_core, kwargs)
            assert (code_c, steps_c) == (code, steps), "parity violation"
            line += f" | compiled {t_c * 1e3:7.1f} ms | speedup {t_py / t_c:6.1f}x"
        print(line)


if __name__ == "__main__":
    main()
