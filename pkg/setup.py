import os

from setuptools import Extension, setup

# The simplex pivot kernel has an optional compiled implementation.  The
# build degrades gracefully: no Cython or no working compiler just means the
# package runs on the pure-numpy kernel instead.
ext_modules = []
if os.environ.get("MINREGRET_PURE_PYTHON") != "1":
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [
                Extension(
                    "minregret.lp._kernel_cy",
                    ["src/minregret/lp/_kernel_cy.pyx"],
                    optional=True,
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
