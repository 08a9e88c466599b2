"""Smoke test for the `qlrc` Python extension.

Build and install first, e.g.

    maturin build -m crates/python/Cargo.toml -o dist && pip install dist/qlrc-*.whl

then run `python python/smoke_test.py` from the repository root.
"""

import json
import pathlib
import sys

import qlrc

ROOT = pathlib.Path(__file__).resolve().parent.parent


def check(cond, what):
    print(("ok   " if cond else "FAIL ") + what)
    if not cond:
        check.failed += 1


check.failed = 0


def main():
    f = qlrc.Field(2, 5, [1, 0, 1, 0, 0, 1])
    alpha = 2
    check(f.q == 32, "GF(32) has 32 elements")
    check(f.mul(alpha, f.inv(alpha)) == 1, "alpha * alpha^-1 = 1")
    check(f.coeffs(f.pow(alpha, 5)) == [1, 0, 1, 0, 0], "alpha^5 = 1 + alpha^2")
    s = f.sqrt(7)
    check(s is not None and f.mul(s, s) == 7, "square roots in characteristic 2")

    ex = qlrc.Instance.worked_example()
    check((ex.n, ex.k, ex.r, ex.kappa) == (32, 19, 3, 6), "worked example is [32,19]_32, [[32,6]]")
    check(ex.good_polynomial == [0, 6, 7, 0, 1], "g = x^4 + (a^2+a+1) x^2 + (a^2+a) x")
    report = ex.bounds()
    check((report["degree_bound"], report["agl_bound_int"]) == (4, 5), "degree bound 4, AGL bound 5")

    msg = ex.random_message(seed=3)
    word = ex.encode(msg)
    received = list(word)
    received[10] = None
    value, reads = ex.repair(received, 10)
    check(value == word[10] and len(reads) == ex.r, "local repair reads r symbols and is exact")

    checks = ex.verify(seed=1, trials=20)
    check(all(passed for _, passed, _ in checks), f"{len(checks)} verification checks pass")
    audit = ex.weight_bound_audit(trials=20, seed=2)
    check(not audit["failures"], "weight-bound audit on 20 codewords")

    again = qlrc.Instance.from_dump(ex.to_json())
    check(again.generator() == ex.generator(), "dump round trip")

    small = qlrc.Instance.from_spec((ROOT / "specs" / "small_gf8.json").read_text())
    delta = small.distance_bruteforce()
    check(delta == 3, "brute-force distance of the GF(8) instance is 3")
    try:
        ex.distance_bruteforce()
        check(False, "brute force over the cap raises")
    except OverflowError:
        check(True, "brute force over the cap raises OverflowError")

    ext = qlrc.Instance.from_spec((ROOT / "specs" / "extended_gf7.json").read_text())
    check(ext.extended and ext.field.q == 49, "GF(7) multipliers lift to GF(49)")

    rows = qlrc.sweep_kappa(63, 6, 64)
    check(rows[0][:4] == (1, 32, 7, 18), "first sweep row for n=63, r=6, q=64")
    check(qlrc.agl_bound(32, 3, 21)[0] == 5, "agl_bound(32, 3, 21) = 5")

    try:
        qlrc.Instance.from_spec(json.dumps({"field": {"p": 2, "m": 3}}))
        check(False, "bad spec raises")
    except ValueError:
        check(True, "bad spec raises ValueError")

    print("all smoke checks passed" if check.failed == 0 else f"{check.failed} smoke check(s) failed")
    return 1 if check.failed else 0


if __name__ == "__main__":
    sys.exit(main())
