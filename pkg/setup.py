from setuptools import setup, Extension
from Cython.Build import cythonize

extensions = [
    Extension("mtdist._dp_cy", ["src/mtdist/_dp_cy.pyx"]),
]

setup(
    ext_modules=cythonize(extensions, compiler_directives={"language_level": "3"}),
)
