"""Build the optional compiled reduction kernel.

Without Cython or a C compiler the package installs as pure Python and the
fallback kernel is used.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [Extension("jetspace.groebner._kernel_c", ["src/jetspace/groebner/_kernel_c.pyx"])],
        compiler_directives={"language_level": "3"},
        quiet=True,
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
