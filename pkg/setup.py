from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "crgames.solver._kernel_cy",
                ["src/crgames/solver/_kernel_cy.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
            "initializedcheck": False,
        },
    )
except ImportError:
    # Without Cython the package still installs; the solver falls back to the
    # pure-Python kernel at import time.
    extensions = []

setup(ext_modules=extensions)
