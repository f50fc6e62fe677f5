"""Parity between the numba backend and the pure-Python fallback."""

import json
import math
import os
import subprocess
import sys
import textwrap

import numpy as np
import pytest

from snbif import kernels

PROBE = textwrap.dedent("""
    import json, math
    import numpy as np
    from snbif import kernels

    means = np.array([0.0, 1.0, 0.0, -1.0])
    amps = np.array([0.2])
    angs = np.array([2.0 * math.pi * 0.6180339887498949])
    phs = np.array([0.4])
    off = np.array([0, 0, 1, 1, 1], dtype=np.int64)
    st, t, x, n = kernels.rk45_x(means, amps, angs, phs, off, kernels.CUBIC,
                                 kernels.ADDITIVE, 0.1, 0.0, 7.0, 0.3,
                                 1e-10, 1e-13, 1e6, math.inf)
    y0 = np.array([0.3, 0.0, 1.0, 0.0, 0.0])
    st2, t2, y, n2 = kernels.rk45_orbit(means, amps, angs, phs, off, kernels.CUBIC,
                                        kernels.ADDITIVE, 0.1, 0.0, 7.0, y0, 2,
                                        1e-10, 1e-13, 1e6, math.inf)
    frac = kernels.measure_positive_fraction(
        np.array([0.25]), np.array([-0.25]), np.array([2.0 * math.pi]),
        np.array([0.0]), np.array([0, 1], dtype=np.int64), kernels.DEADZONE,
        -1.0, 1.0, np.array([0.25]), 50.0, 0.02, 1e-12)
    print(json.dumps({"numba": bool(kernels.USING_NUMBA), "x": x, "n": int(n),
                      "y": list(y), "frac": float(frac[0])}))
""")


def _run(env):
    out = subprocess.run([sys.executable, "-c", PROBE],
                         env=env, capture_output=True, text=True, check=True)
    return json.loads(out.stdout.strip().splitlines()[-1])


@pytest.mark.skipif(not kernels.USING_NUMBA, reason="already running the fallback")
def test_fallback_matches_jit():
    base = dict(os.environ)
    base.pop("SNBIF_NO_NUMBA", None)
    fast = _run(base)
    slow = _run(dict(base, SNBIF_NO_NUMBA="1"))
    assert fast["numba"] and not slow["numba"]
    assert slow["x"] == pytest.approx(fast["x"], abs=1e-12)
    assert slow["n"] == fast["n"]
    for a, b in zip(fast["y"], slow["y"]):
        assert b == pytest.approx(a, rel=1e-10, abs=1e-12)
    assert slow["frac"] == pytest.approx(fast["frac"], abs=1e-9)


def test_backend_flag_reports():
    env = dict(os.environ, SNBIF_NO_NUMBA="1")
    out = subprocess.run(
        [sys.executable, "-c", "from snbif import kernels; print(kernels.USING_NUMBA)"],
        env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "False"
