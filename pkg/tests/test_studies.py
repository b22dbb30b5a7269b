import numpy as np
import pytest

from cevgreeks import DEFAULT_PARAMS, TimeGrid
from cevgreeks.studies import approx_study, derivative_check, order_violation, sample_r_indices

STRESSED = DEFAULT_PARAMS.replace(kappa=1.0, theta=1.0)


def test_order_violation():
    u = np.array([[0.1, 0.2, 0.3]])
    se = np.array([[0.2, 0.2, 0.25]])
    s = np.array([[0.3, 0.19, 0.4]])
    assert order_violation(u, se, s)[0] == pytest.approx(0.05)
    assert order_violation(u, u, u)[0] == 0.0


def test_study_shrinks_to_zero_under_stress():
    eps = [0.6, 0.4, 0.3, 0.2, 0.15, 0.1]
    study = approx_study(STRESSED, TimeGrid(1.0, 256), 0, 1000, eps)
    l2 = [row.l2_error for row in study.rows]
    assert l2[0] > 1e-2
    for a, b, row_a, row_b in zip(l2, l2[1:], study.rows, study.rows[1:]):
        assert b <= a + 2 * np.hypot(row_a.l2_std_error, row_b.l2_std_error)
    for row in study.rows:
        if row.eps < study.path_min:
            assert row.l2_error == 0.0
        assert row.max_order_violation <= 1e-3


def test_study_thread_invariant():
    grid = TimeGrid(1.0, 64)
    a = approx_study(STRESSED, grid, 1, 5000, [0.4, 0.2], threads=1)
    b = approx_study(STRESSED, grid, 1, 5000, [0.4, 0.2], threads=3)
    assert a == b


def test_study_rejects_empty_list():
    with pytest.raises(ValueError):
        approx_study(DEFAULT_PARAMS, TimeGrid(1.0, 8), 0, 10, [])


def test_sample_r_indices():
    grid = TimeGrid(1.0, 100)
    r = sample_r_indices(grid, 50, 3)
    assert len(set(r.tolist())) == 50 and r.min() >= 0 and r.max() < 100
    assert np.array_equal(r, sample_r_indices(grid, 50, 3))
    assert len(sample_r_indices(TimeGrid(1.0, 10), 50, 3)) == 10


def test_derivative_check_rows():
    grid = TimeGrid(1.0, 512)
    rows = derivative_check(DEFAULT_PARAMS, grid, 0, [0, 1], [("sigma_T", "W"), ("X_T", "W_hat")], [0, 200], threads=2)
    assert len(rows) == 8
    assert all(row.rel_error < 0.02 for row in rows)
    with pytest.raises(ValueError):
        derivative_check(DEFAULT_PARAMS, grid, 0, [0], [("vol", "W")], [0])


def test_derivative_check_edge_windows():
    grid = TimeGrid(1.0, 64)
    rows = derivative_check(DEFAULT_PARAMS, grid, 0, [0], [("nu_T", "W_hat"), ("sigma_T", "W")], [10, 64])
    by_key = {(r.quantity, r.r_index): r for r in rows}
    hat = by_key[("nu_T", 10)]
    assert hat.bump_value == 0.0 and hat.riemann_value == 0.0 and hat.rel_error == 0.0
    end = by_key[("sigma_T", 64)]
    assert end.bump_value == 0.0 and end.riemann_value == 0.0 and end.rel_error == 0.0
