"""Build script: compiles the optional GF(q) kernel extension.

The package is fully functional without the extension (a numpy fallback
is selected at import); any build failure here is therefore non-fatal.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "nsumbox._fastkernels",
                ["src/nsumbox/_fastkernels.pyx"],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
