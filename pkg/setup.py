import numpy as np
from setuptools import Extension, setup

# The compiled kernels are optional: the package falls back to the pure-Python
# implementations in nodelabel._kernels.pykernels when the extension is absent.
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "nodelabel._kernels._ckernels",
                ["src/nodelabel/_kernels/_ckernels.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3", "-ffp-contract=off"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level=3,
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
