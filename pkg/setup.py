import numpy
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

if cythonize is not None:
    extensions = [
        Extension(
            "packrigid._kernels._angles_cy",
            ["src/packrigid/_kernels/_angles_cy.pyx"],
            include_dirs=[numpy.get_include()],
            define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            optional=True,
        )
    ]
    ext_modules = cythonize(extensions, compiler_directives={"language_level": "3"})
else:
    # pure-python fallback is selected at import time, so a missing compiler
    # or missing Cython only costs speed
    ext_modules = []

setup(ext_modules=ext_modules)
