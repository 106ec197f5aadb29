"""Compiled and NumPy kernels agree; the fallback is selected by environment."""
import os
import subprocess
import sys

import numpy as np
import pytest

from minrep import _kernels
from minrep._kernels import _pykernels as py

cy = pytest.importorskip("minrep._kernels._ckernels")


def test_laguerre_table_backends_agree():
    u = np.linspace(0, 80, 301)
    a, b = cy.laguerre_function_table(80, 0.5, u, -0.3), py.laguerre_function_table(80, 0.5, u, -0.3)
    assert np.max(np.abs(a - b)) <= 1e-13 * np.max(np.abs(b))


def test_tilde_series_backends_agree():
    q = np.linspace(-40, 40, 201)
    for nu in (-0.5, 0.0, 2.5):
        a, b = cy.tilde_series(nu, q, 1.0, 0, 1e-17, 500), py.tilde_series(nu, q, 1.0, 0, 1e-17, 500)
        # alternating sums cancel; the summation-order error scales with sum |term|
        scale = py.tilde_series(nu, np.abs(q), 1.0, 0, 1e-17, 500)
        assert np.max(np.abs(a - b) / scale) <= 1e-14


def test_read_only_inputs_accepted():
    u = np.linspace(0, 5, 11)
    u.setflags(write=False)
    assert cy.laguerre_function_table(3, 0.0, u, 0.0).shape == (3, 11)


def test_pure_python_switch():
    env = dict(os.environ, MINREP_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "import minrep; print(minrep.KERNEL_BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
    assert _kernels.BACKEND in ("cython", "python")
