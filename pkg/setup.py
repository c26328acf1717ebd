from pathlib import Path

from setuptools import find_packages, setup

from lzhm import __version__

requirements = [
    line.strip()
    for line in Path(__file__).with_name("requirements.txt").read_text(encoding="utf-8").splitlines()
    if line.strip() and not line.startswith(("pytest", "hypothesis"))
]

setup(
    name="lzhm",
    version=__version__,
    description="LZ and Iterated Huffman compression laboratory for hidden Markov sources",
    packages=find_packages(include=["lzhm", "lzhm.*"]),
    python_requires=">=3.10",
    install_requires=requirements,
    extras_require={"test": ["pytest", "hypothesis"]},
    entry_points={"console_scripts": ["lzhm=lzhm.main:main"]},
)
