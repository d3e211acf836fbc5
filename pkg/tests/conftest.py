import random

import mpmath
import pytest
from mpmath import mp


@pytest.fixture
def rng():
    return random.Random(0x5EED)


def rel_err(a, b, bits=300):
    """|a - b| / max(|a|, |b|) computed at high precision; 0 if both zero."""
    with mp.workprec(bits):
        aa = _as_mpc(a)
        bb = _as_mpc(b)
        scale = max(abs(aa), abs(bb))
        if scale == 0:
            return mp.mpf(0)
        return abs(aa - bb) / scale


def _as_mpc(x):
    if hasattr(x, "to_mpc"):
        return x.to_mpc()
    if hasattr(x, "numerator") and hasattr(x, "denominator") and not isinstance(x, int):
        return mp.mpc(x.numerator) / mp.mpc(x.denominator)
    return mp.mpc(x)


def assert_close(a, b, tol, msg=""):
    e = rel_err(a, b)
    assert e <= tol, f"{msg} rel err {mpmath.nstr(e, 5)} > {mpmath.nstr(mp.mpf(tol), 5)}"
