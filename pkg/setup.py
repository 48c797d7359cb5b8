from setuptools import Extension, setup

# The simulation kernel compiles to a C extension when Cython is available.
# The package works without it (pure-Python fallback selected at import).
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("hiccups_perf._sim_core", ["src/hiccups_perf/_sim_core.pyx"])],
        compiler_directives={
            "language_level": 3,
            "boundscheck": False,
            "wraparound": False,
            "initializedcheck": False,
            "cdivision": True,
        },
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
