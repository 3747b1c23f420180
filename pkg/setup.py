from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # pure-Python install; linalg_fp falls back at import
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "hookprod._reduce_ext",
                ["src/hookprod/_reduce_ext.pyx"],
                language="c++",
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
