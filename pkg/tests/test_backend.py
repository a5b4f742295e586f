from __future__ import annotations

import os
import subprocess
import sys

FRACTIONS_SMOKE = """
from fractions import Fraction
from cachekit.core import BACKEND, rat
from cachekit.caching import yma_load
from cachekit.icmap import ICInstance, ICUser
from cachekit.icschemes import composite_symmetric_rate

assert BACKEND == "fractions"
assert isinstance(rat(1, 3), Fraction)
assert yma_load(2, 4, 1) == Fraction(5, 4)
ic = ICInstance(
    num_messages=2,
    users=(ICUser(demand=(1,), side=(2,)), ICUser(demand=(2,), side=(1,))),
)
value, ca = composite_symmetric_rate(ic)
assert value == 1 and ca.symmetric_rate == 1
print("ok")
"""


def run_with_backend(backend: str, code: str) -> subprocess.CompletedProcess:
    env = dict(os.environ, CACHEKIT_RATIONAL=backend)
    return subprocess.run(
        [sys.executable, "-c", code], env=env, capture_output=True, text=True
    )


def test_default_backend_is_exposed():
    from cachekit.core import BACKEND

    assert BACKEND in ("gmpy2", "fractions")


def test_fractions_backend_end_to_end():
    proc = run_with_backend("fractions", FRACTIONS_SMOKE)
    assert proc.returncode == 0, proc.stderr
    assert proc.stdout.strip() == "ok"


def test_unknown_backend_is_rejected():
    proc = run_with_backend("decimal", "import cachekit.core")
    assert proc.returncode != 0
    assert "CACHEKIT_RATIONAL" in proc.stderr
