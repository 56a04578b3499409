import numpy
from Cython.Build import cythonize
from setuptools import Extension, setup

# No -ffast-math: the compensated accumulators in the kernel rely on
# IEEE-exact error-free transformations.
extensions = [
    Extension(
        "dyadicwalk._ckernel",
        ["src/dyadicwalk/_ckernel.pyx"],
        include_dirs=[numpy.get_include()],
        extra_compile_args=["-O3"],
    )
]

setup(
    ext_modules=cythonize(
        extensions,
        compiler_directives={"language_level": "3", "boundscheck": False, "wraparound": False},
    )
)
