"""Smoke test for the tdfejer extension module.

Build and install first:

    pip install --no-build-isolation -e crates/py
    python python/smoke_test.py
"""

import math

import tdfejer


def close(a, b, tol=1e-10):
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


def main():
    seq = tdfejer.GroupSequence(["S3"], 3)
    assert seq.big_p == [1, 3, 9, 27], seq.big_p
    assert seq.rho == 6
    assert seq.point_count == 27
    assert seq.digits(14) == [2, 1, 1]
    assert seq.order_index(14) == 2
    assert seq.tail_index(14, 1) == 12

    table = seq.character_table(0)
    sizes = seq.class_sizes(0)
    for i, row in enumerate(table):
        for j, other in enumerate(table):
            ip = sum(s * a * b.conjugate() for s, a, b in zip(sizes, row, other)) / 6
            assert close(ip.real, 1.0 if i == j else 0.0) and abs(ip.imag) < 1e-12

    walsh = tdfejer.GroupSequence(["Z2"], 4)
    assert walsh.big_m == [1, 2, 4, 8, 16]

    f = tdfejer.ClassFunction.random(seq, 2, seed=42, kind="general")
    assert f.dim == 2 and len(f) == 27
    for ident in tdfejer.identity_ids():
        needs_f = ident not in ("lemma41", "lemma42", "block_formula")
        report = tdfejer.check_identity(seq, ident, f if needs_f else None)
        assert report["passed"], (ident, report)

    chi5 = tdfejer.ClassFunction.character(seq, 5)
    for n in range(6, 20):
        err = (tdfejer.fejer_mean(seq, chi5, n) - chi5).norm(seq)
        assert close(err, 6.0 / n), (n, err)
        assert (tdfejer.dirichlet_mean(seq, chi5, n) - chi5).norm(seq) < 1e-12

    assert close(tdfejer.dirichlet_kernel(seq, 27, 0, 0).real, 27.0 / seq.point_weight(0) / 27.0)

    e0 = tdfejer.conditional_expectation(seq, f, 0)
    mean = [[sum(seq.point_weight(i) * f.value(i)[r][c] for i in range(27)) for c in range(2)] for r in range(2)]
    for r in range(2):
        for c in range(2):
            assert abs(e0.value(5)[r][c] - mean[r][c]) < 1e-12

    pos = tdfejer.ClassFunction.random(seq, 2, seed=7, kind="positive")
    for rep in tdfejer.check_bound(seq, "doob", pos):
        assert rep["pass"] and rep["estimate_kind"] == "exact", rep
    for rep in tdfejer.check_bound(seq, "prop13", tdfejer.ClassFunction.random(seq, 1, seed=3, kind="positive")):
        assert rep["pass"], rep

    join = tdfejer.loewner_join([[[1, 0], [0, 0]], [[0, 0], [0, 1]]])
    assert close(join[0][0].real, 1.0) and close(join[1][1].real, 1.0)
    assert abs(join[0][1]) < 1e-8

    ones = tdfejer.ClassFunction([[[1.0]]] * 27)
    assert close(tdfejer.positive_family_norm(seq, [ones, ones]), 1.0)

    g = tdfejer.ClassFunction.from_json(seq, f.to_json(seq))
    assert (g - f).norm(seq) == 0.0

    try:
        tdfejer.GroupSequence(["S9"], 2)
    except ValueError:
        pass
    else:
        raise AssertionError("unknown group accepted")

    print("tdfejer smoke test passed:", seq, f"rho={seq.rho}", f"sqrt(P_L)={math.sqrt(seq.point_count):.3f}")


if __name__ == "__main__":
    main()
