"""Build hook for the optional Cython kernels.

The extension is marked optional: if the compiler or Cython is missing the
package still installs and ``minrep._kernels`` falls back to NumPy.
"""
from setuptools import Extension, setup

try:
    import numpy as np
    from Cython.Build import cythonize
except ImportError:  # pragma: no cover
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "minrep._kernels._ckernels",
                ["src/minrep/_kernels/_ckernels.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
