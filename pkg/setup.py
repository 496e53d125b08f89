"""Build hook for the optional compiled kernel.

If Cython or a C compiler is missing the package installs without it and the
pure-Python kernel is used instead.
"""
from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [Extension("knotmove._canon", ["src/knotmove/_canon.pyx"])],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
