"""Smoke test for the Python bindings.

Build and install the extension first, e.g.

    pip install maturin
    maturin build --release -m crates/python/Cargo.toml -o dist
    pip install dist/hornred-*.whl

then run `python python/smoke_test.py`.
"""

import json
from fractions import Fraction

import mpmath

import hornred_py as hr


def g2_series(a1, a2, b1, b2, x, y, order=40):
    """Independent truncated G2 sum using mpmath's rising factorials."""
    total = mpmath.mpf(0)
    for m in range(order + 1):
        for n in range(order + 1):
            total += (
                mpmath.rf(a1, m) * mpmath.rf(a2, n) * mpmath.rf(b1, n - m) * mpmath.rf(b2, m - n)
                * mpmath.mpf(x) ** m * mpmath.mpf(y) ** n
                / (mpmath.factorial(m) * mpmath.factorial(n))
            )
    return total


def main():
    mpmath.mp.dps = 40

    functions = hr.list_functions()
    assert len(functions) == 30, functions
    assert ("G1", ["a", "b1", "b2"], 3) in functions

    zero = hr.reduce("G1", [0, 0, 0])
    assert zero.to_text() == "{{1,0,0,0},{a,b1,b2}}", zero.to_text()

    g1 = hr.reduce("G1", [-1, -1, 0])
    assert g1.new_params == ["a - 1", "b1 - 1", "b2"], g1.new_params
    assert g1.q12 == "0"
    payload = json.loads(g1.to_json())
    assert payload["coefficients"]["q0"] == g1.q0
    assert "NewParameters" in g1.to_cas()
    check = g1.verify()
    assert check.status == "pass", check

    h1c = hr.reduce("H1c", [0, 1, 1], ["a", "b", "c"])
    check = h1c.verify({"a": Fraction(1, 3), "b": "2/7", "c": 5 / 11 - 0.5}, z=(0.03, 0.02))
    assert check.status == "pass" and check.relative_error < 1e-12, check

    fixed = hr.reduce("H1", [-1, 0, 0, 1], [Fraction(1, 3), Fraction(1, 5), Fraction(3, 7), Fraction(2, 9)])
    assert fixed.new_params == ["-2/3", "1/5", "3/7", "11/9"], fixed.new_params
    assert fixed.verify(z=("1/20", "-1/25")).status == "pass"

    ev = hr.evaluate("G2", ["1/3", "1/5", "1/7", "2/9"], ("0.05", "0.07"))
    expected = g2_series(mpmath.mpf(1) / 3, mpmath.mpf(1) / 5, mpmath.mpf(1) / 7, mpmath.mpf(2) / 9, "0.05", "0.07")
    assert ev.converged
    assert abs(ev.value - complex(expected)) < 1e-13 * abs(complex(expected)), (ev.value, expected)

    try:
        hr.reduce("G1", [-1, -1, 0], [2, "b1", "b2"])
    except hr.ExceptionalParameters:
        pass
    else:
        raise AssertionError("G1 with a = 2 should be refused")
    try:
        hr.reduce("Foo", [0])
    except KeyError:
        pass
    else:
        raise AssertionError("unknown function accepted")
    try:
        hr.reduce("G1", [0, 0])
    except ValueError:
        pass
    else:
        raise AssertionError("wrong arity accepted")

    print("smoke test passed")


if __name__ == "__main__":
    main()
