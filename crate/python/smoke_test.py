"""Smoke test for the levy_tails_py extension.

Build first:
    cargo build -p levy-tails-py --features extension-module --release
    cp target/release/liblevy_tails_py.so python/levy_tails_py.so
then run `python3 python/smoke_test.py` from the repository root.
"""

import math
import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import levy_tails_py as lt


def close(a, b, tol):
    return abs(a - b) <= tol * max(abs(b), 1e-300)


def main():
    names = lt.catalog_names()
    assert "stable-sub" in names and "cauchy" in names, names

    assert close(lt.gamma(0.5), math.sqrt(math.pi), 1e-14)
    assert close(lt.bessel_j(0.5, 1.0), math.sqrt(2 / math.pi) * math.sin(1.0), 1e-13)

    p = lt.Process("stable-sub", {"gamma": 0.5})
    assert p.kind == "subordinator"
    assert close(p.exponent(4.0), 2.0, 1e-15)

    tail, source = p.exact("tail", 1.0, 1.0)
    assert close(tail, math.erf(1.0 / 2.0), 1e-8), (tail, source)

    pred = p.predict("T1_1", 0.01, 100.0)
    assert close(pred["epsilon"], 2e-3, 1e-12), pred

    rows = p.converge("T1_1", "10:1e6:6", "eps=1e-4")
    assert len(rows) == 6
    assert abs(rows[-1][5] - 1.0) < 0.01, rows[-1]
    assert p.converge_csv("T1_1", "10:1e3:3", "t=0.01").splitlines()[1] == "r,t,epsilon,exact,asymptotic,ratio"

    assert p.forward_laplace_check(1.0, 1.0) < 1e-5

    c = lt.Process("cauchy", {"d": 1})
    dens, _ = c.exact("density", 1.0, 1.0, "numerical")
    assert close(dens, 1.0 / (2.0 * math.pi), 1e-8), dens

    try:
        lt.Process("no-such-process")
    except ValueError:
        pass
    else:
        raise AssertionError("unknown process accepted")

    print("smoke test passed")


if __name__ == "__main__":
    main()
