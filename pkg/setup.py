import pathlib
from setuptools import find_packages, setup
from prime_tiles.__version__ import __version__


# The directory containing this file
HERE = pathlib.Path(__file__).parent

# The text of the README file
README = (HERE / "README.md").read_text()

setup(
    name="prime_tiles",
    version=__version__,
    description="Exact verification and construction of tiles and spectral sets in Z_n^d.",
    long_description=README,
    long_description_content_type="text/markdown",
    include_package_data=True,
    license="MIT",
    classifiers=[
        "Development Status :: 4 - Beta",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: MIT License",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3 :: Only",
        "Programming Language :: Python :: 3.9",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
    packages=find_packages(
        exclude=(
            "examples",
            "requirements",
            "tests",
        )
    ),
    install_requires=[
        "numpy",
        "sympy",
    ],
    extras_require={
        "test": ["hypothesis"],
    },
    python_requires=">=3.9"
)
