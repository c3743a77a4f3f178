"""Build script: compiles the residual kernel when Cython is available.

The package works without the extension (a NumPy fallback is selected at
import time), so any build failure here is non-fatal by design: we simply
ship no extension module.
"""

from setuptools import Extension, setup


def extension_modules():
    try:
        import numpy
        from Cython.Build import cythonize
    except ImportError:
        return []
    ext = Extension(
        "kgbound._kernels._residual",
        ["src/kgbound/_kernels/_residual.pyx"],
        include_dirs=[numpy.get_include()],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
        # No -ffast-math and no -march=native: the compiled kernel must
        # perform the same IEEE operations in the same order as the
        # NumPy fallback so both produce bit-identical residuals.
        extra_compile_args=["-O3"],
    )
    try:
        return cythonize([ext], compiler_directives={"language_level": "3"})
    except Exception:
        return []


setup(ext_modules=extension_modules())
