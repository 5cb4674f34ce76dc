from setuptools import Extension, setup
from Cython.Build import cythonize

extensions = [
    Extension(
        "tuberupture._stepper",
        ["src/tuberupture/_stepper.pyx"],
        # -ffp-contract=off keeps arithmetic bit-compatible with the
        # pure-Python twin (no FMA contraction), which the parity test relies on.
        extra_compile_args=["-O3", "-ffp-contract=off"],
        language="c",
    ),
]

setup(ext_modules=cythonize(extensions, language_level=3))
