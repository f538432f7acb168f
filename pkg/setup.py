"""
zetalab
Numerical laboratory for fractal strings, zeta functions and the spectral operator.
"""
import re
import sys
from setuptools import setup, find_packages

short_description = __doc__.split("\n")[2]

# from https://github.com/pytest-dev/pytest-runner#conditional-requirement
needs_pytest = {"pytest", "test", "ptr"}.intersection(sys.argv)
pytest_runner = ["pytest-runner"] if needs_pytest else []

try:
    with open("README.md", "r") as handle:
        long_description = handle.read()
except OSError:
    long_description = None

with open("zetalab/_version.py", "r") as handle:
    version = re.search(r'__version__ = "([^"]+)"', handle.read()).group(1)


setup(
    name="zetalab",
    description=short_description,
    long_description=long_description,
    long_description_content_type="text/markdown",
    version=version,
    license="LGPLv3",
    packages=find_packages(),
    include_package_data=True,
    # Allows `setup.py test` to work correctly with pytest
    setup_requires=[] + pytest_runner,
    install_requires=[
        "numpy",
        "scipy>=1.6",
        "pandas>=1.1.3",
        "matplotlib",
        "mpmath>=1.2",
        "pytest-cov==3.0.0",
    ],
    entry_points={"console_scripts": ["zetalab=zetalab.cli:main"]},
    platforms=["Linux"],
    python_requires=">=3.8",
)
