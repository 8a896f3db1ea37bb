import os
import subprocess
import sys
from fractions import Fraction

from gorlab._rational import BACKEND, ONE, ZERO, q_str, to_q


def test_coercions_agree():
    assert to_q("3/6") == to_q(Fraction(1, 2)) == to_q(1) / 2
    assert ZERO + ONE == 1


def test_q_str_canonical():
    assert q_str(to_q("-6/4")) == "-3/2"
    assert q_str(7) == "7"


def _backend_under(value):
    env = dict(os.environ, GORLAB_RATIONAL=value)
    out = subprocess.run(
        [sys.executable, "-c", "from gorlab._rational import BACKEND; print(BACKEND)"],
        env=env, capture_output=True, text=True,
    )
    return out.returncode, out.stdout.strip()


def test_backend_switch():
    assert _backend_under("fraction") == (0, "fraction")
    code, _ = _backend_under("bogus")
    assert code != 0
    assert BACKEND in ("gmpy2", "fraction")


def test_fraction_backend_computes_same_cohomology():
    code = "from gorlab.presets import preset; print(preset('example').cohomology().dims.dims)"
    env = dict(os.environ, GORLAB_RATIONAL="fraction")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True)
    assert out.stdout.strip() == "{0: 1, 1: 1, 3: 2, 5: 1, 6: 1}"
