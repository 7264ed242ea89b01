import io

import numpy as np
import pytest

from pminsurf.errors import OutOfDomainError
from pminsurf.fields import (AnalyticField, GridField, field_eval, read_grid_csv,
                             write_grid_csv)


def bilinear_xy():
    return AnalyticField(
        lambda x, y: np.asarray(x) * np.asarray(y),
        lambda x, y: np.asarray(y) + 0.0 * np.asarray(x),
        lambda x, y: np.asarray(x) + 0.0 * np.asarray(y),
        lambda x, y: 0.0 * np.asarray(x),
        lambda x, y: 1.0 + 0.0 * np.asarray(x),
        lambda x, y: 0.0 * np.asarray(x))


def test_analytic_field_eval_xy():
    u, grad, hess = field_eval(bilinear_xy(), (2.0, 3.0))
    assert u == 6.0
    assert np.allclose(grad, (3.0, 2.0))
    assert np.allclose(hess, [[0, 1], [1, 0]])


def smooth(x, y):
    return np.sin(x) * np.cos(y)


def test_grid_convergence_orders():
    # Gradient 4th order, Hessian 2nd order, observed at a fixed node.
    errs_g, errs_h = [], []
    for h in (0.1, 0.05, 0.025):
        n = int(round(2.0 / h)) + 1
        gf = GridField.from_function(smooth, -1.0, -1.0, h, n, n)
        x0, y0 = 0.2 * round(1 / h) * h - 1.0 + 1.0, 0.0   # a shared node
        x0 = gf.x0 + gf.h * round((0.2 - gf.x0) / gf.h)
        y0 = gf.y0 + gf.h * round((0.1 - gf.y0) / gf.h)
        gx, gy = gf.gradient(x0, y0)
        ex = np.hypot(gx - np.cos(x0) * np.cos(y0), gy + np.sin(x0) * np.sin(y0))
        uxx, uxy, uyy = gf.hessian(x0, y0)
        eh = max(abs(uxx + np.sin(x0) * np.cos(y0)),
                 abs(uxy + np.cos(x0) * np.sin(y0)),
                 abs(uyy + np.sin(x0) * np.cos(y0)))
        errs_g.append(ex)
        errs_h.append(eh)
    order_g = np.log2(errs_g[0] / errs_g[1])
    order_h = np.log2(errs_h[0] / errs_h[1])
    assert order_g >= 3.5
    assert order_h >= 1.8


def test_grid_gradient_error_scale():
    # 4th-order stencils: error < C h^4 on a smooth field.
    for h in (0.1, 0.05):
        n = int(round(2.0 / h)) + 1
        gf = GridField.from_function(smooth, -1.0, -1.0, h, n, n)
        x0 = gf.x0 + gf.h * (n // 2)
        y0 = gf.y0 + gf.h * (n // 2 - 1)
        gx, gy = gf.gradient(x0, y0)
        err = np.hypot(gx - np.cos(x0) * np.cos(y0), gy + np.sin(x0) * np.sin(y0))
        assert err < 0.5 * h**4


def test_grid_margin_contract():
    gf = GridField.from_function(smooth, 0.0, 0.0, 0.1, 11, 11)
    with pytest.raises(OutOfDomainError):
        gf.value(0.05, 0.5)          # inside the hull, inside the 2-cell margin
    with pytest.raises(OutOfDomainError):
        gf.gradient(1.5, 0.5)        # outside the hull
    gf2 = GridField.from_function(smooth, 0.0, 0.0, 0.1, 11, 11, allow_onesided=True)
    gf2.value(0.05, 0.5)             # one-sided zone opt-in


def test_grid_requires_minimum_size_and_positive_h():
    with pytest.raises(ValueError):
        GridField(0, 0, 0.1, np.zeros((4, 6)))
    with pytest.raises(ValueError):
        GridField(0, 0, -0.1, np.zeros((6, 6)))


def test_grid_hessian_symmetric_by_construction():
    gf = GridField.from_function(lambda x, y: np.sin(2 * x + y) * y, 0.0, 0.0, 0.05, 31, 31)
    _, grad, hess = field_eval(gf, (0.7, 0.8))
    assert hess[0, 1] == hess[1, 0]


def test_grid_csv_roundtrip(tmp_path):
    gf = GridField.from_function(smooth, -0.5, 0.25, 0.125, 9, 7)
    path = str(tmp_path / "grid.csv")
    write_grid_csv(gf, path)
    back = read_grid_csv(path)
    assert back.nx == 9 and back.ny == 7
    assert back.x0 == -0.5 and back.y0 == 0.25 and back.h == 0.125
    assert np.array_equal(back.values, gf.values)
    with open(path) as fh:
        assert fh.readline().startswith("# x0=")


def test_grid_csv_header_required():
    with pytest.raises(ValueError):
        read_grid_csv(io.StringIO("1,2\n3,4\n"))
