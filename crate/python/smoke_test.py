"""Smoke test for the pseudosim_py extension.

Build and install first:  pip install ./crates/py   (or maturin develop -m crates/py/Cargo.toml)
"""

import pseudosim_py as ps


def close(a, b, tol=1e-9):
    return abs(a - b) <= tol


def main():
    p = ps.Matrix.diag([1.0, 3.0])
    h = [[1.0], [1.0]]
    t, rank, hermitian = ps.pseudo_similarity(p, h)
    assert t.shape == (1, 1) and rank == 1 and hermitian
    assert close(t[0, 0].real, 2.0)

    report = ps.check_interlacing([1.0, 3.0], [2.0], 1e-12)
    assert report["passed"] and not report["vacuous"]

    a = ps.Matrix([[1, 2], [2, 4]])
    assert ps.numerical_rank(a) == 1
    g = ps.pseudo_inverse(a)
    assert (a @ g @ a).max_abs_diff(a) < 1e-12

    assert all(close(x, y) for x, y in zip(ps.eigvals_hermitian([[2, 1], [1, 2]]), [1.0, 3.0]))
    rot = ps.eigvals_general([[0, -1], [1, 0]])
    assert close(rot[0].imag, -1.0) and close(rot[1].imag, 1.0)

    rng = ps.Rng(42)
    pp = rng.hermitian_with_spectrum([-1.0, 0.5, 2.0, 4.0])
    hh = rng.full_column_rank(4, 2)
    tt, _, herm = ps.pseudo_similarity(pp, hh)
    eta = ps.classify_real(ps.eigvals_general(tt))
    assert ps.check_interlacing(ps.eigvals_hermitian(pp), eta, 1e-7 * 4)["passed"]

    x = ps.Matrix([[1, 0, 0], [0, 1, 0], [1, 0, 1]])
    oblique, _ = ps.oblique_transform(ps.Matrix.diag([1.0, 2.0, 10.0]), x, [0, 2])
    assert oblique.shape == (2, 2)

    try:
        ps.selection_matrix([0, 0], 3)
    except ValueError:
        pass
    else:
        raise AssertionError("duplicate selection accepted")

    records = ps.run_suite('suites = ["interlace-full-rank", "subsumption"]\ntrials = 5\n')
    assert len(records) == 10 and all(r["passed"] for r in records)
    csv = ps.run_suite_report('suites = ["mp-axioms"]\ntrials = 3\n', "csv")
    assert len(csv.splitlines()) == 4

    print("python smoke test passed")


if __name__ == "__main__":
    main()
