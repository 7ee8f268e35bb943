"""Smoke test for the eigencond extension module.

Build and install first, e.g.

    maturin build --release -m crates/python/Cargo.toml
    pip install target/wheels/eigencond-*.whl

then run `python python/smoke_test.py`.
"""

import math
import sys

import eigencond as ec


def close(a, b, tol):
    return abs(a - b) <= tol * max(1.0, abs(b))


def matmul(a, b):
    n, m, k = len(a), len(b[0]), len(b)
    return [[sum(a[i][l] * b[l][j] for l in range(k)) for j in range(m)] for i in range(n)]


def adjoint(a):
    return [[a[j][i].conjugate() for j in range(len(a))] for i in range(len(a[0]))]


def check_lattice():
    c = ec.lattice_points(7)
    assert len(c) == 7
    assert c.points[0] == 0
    assert all(close(abs(z), 1.0, 1e-15) for z in c.points[1:])
    assert c.min_separation == 1.0
    assert ec.lattice_count(1.0) == 7
    assert len(ec.enumerate_lattice_in_disk(1.0, closed=False)) == 1


def check_conditioning():
    report = ec.condition_report_diagonal(ec.lattice_points(7))
    assert close(report.kappa_max_frob, math.sqrt(6), 1e-12)
    assert close(report.kappa_max_op, 1.0, 1e-12)

    a = [[0, 1], [0, 1]]
    full = ec.condition_report(a)
    for pair in full.eigenpairs:
        assert close(pair.kappa_lambda, math.sqrt(2), 1e-12)
        assert close(pair.kappa_x, 1.0, 1e-12)
    assert close(ec.kappa_lambda(a, 1.0), math.sqrt(2), 1e-12)

    try:
        ec.condition_report([[1, 0], [0, 1]])
    except ec.IllPosedError:
        pass
    else:
        raise AssertionError("identity should be rejected as clustered")

    try:
        ec.condition_report_diagonal(ec.Configuration([0j, 1 + 0j, 1 + 0j]))
    except ec.IllPosedError:
        pass
    else:
        raise AssertionError("duplicate points should be rejected")

    rows, valid, excluded = ec.perturbation_experiment([[0, 0, 0], [0, 1, 0], [0, 0, 2]], 1e-6, trials=20, seed=1)
    assert valid + excluded == 20
    assert all(shift <= kl * (1 + 1e-4) for _, kl, _, shift, _ in rows)


def check_schur():
    a = [[1 + 2j, 3, -1j], [0.5, -2, 1 + 1j], [2j, 1, 0]]
    q, t = ec.schur(a)
    back = matmul(matmul(q, t), adjoint(q))
    err = max(abs(back[i][j] - a[i][j]) for i in range(3) for j in range(3))
    assert err < 1e-12, err
    assert all(t[i][j] == 0 for i in range(3) for j in range(i))


def check_asymptotics():
    for row in ec.reproduce(10_000):
        assert row.relative_deviation < 0.03, row
    assert close(ec.proposition_constant(2.0), 3 ** 0.25 / (2 * math.sqrt(math.pi)), 1e-15)
    rows = ec.convergence_study(2.0, [100, 1000])
    assert rows[1].relative_deviation < rows[0].relative_deviation
    pair = ec.Configuration([-0.5 + 0j, 0.5 + 0j])
    assert close(ec.separation_functional(pair, 2.0), 1 / math.sqrt(2), 1e-15)
    assert close(ec.separation_functional(pair, math.inf), 0.5, 1e-15)


def check_optimizer():
    r = ec.optimize(3, p=2.0, restarts=2, seed=5, init="random")
    assert close(r.objective, 1.0, 1e-3), r
    assert r.objective <= r.init_objective
    assert len(r.best) == 3 and r.trace
    start = ec.lattice_points(30)
    r = ec.optimize(30, p=math.inf, init=start, max_iters=30)
    assert r.objective <= ec.separation_functional(start, math.inf)
    g = ec.gradient(ec.Configuration([0j, 1 + 0j, 0.3 + 0.9j]), 2.0, 5.0)
    assert len(g) == 3


def main():
    for check in (check_lattice, check_conditioning, check_schur, check_asymptotics, check_optimizer):
        check()
        print(f"ok  {check.__name__}")
    print(f"eigencond {ec.__version__}: smoke test passed")
    return 0


if __name__ == "__main__":
    sys.exit(main())
