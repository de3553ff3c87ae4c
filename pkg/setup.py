import numpy as np
from Cython.Build import cythonize
from setuptools import Extension, setup

extensions = [
    Extension(
        "reedyfib._kernels",
        ["src/reedyfib/_kernels.pyx"],
        include_dirs=[np.get_include()],
        language="c++",
        extra_compile_args=["-O3"],
    )
]

setup(ext_modules=cythonize(extensions, compiler_directives={"language_level": "3"}))
