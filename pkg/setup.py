import io
import os
from setuptools import setup, find_packages

ROOT_DIR = os.path.dirname(__file__)

setup(
    name="ray-stmod",
    packages=find_packages(),
    version="0.1.0",
    description=("Exact stable module category computations for finite "
                 "group algebras, with Ray-parallel experiments"),
    long_description=io.open(
        os.path.join(ROOT_DIR, "README.md"), "r", encoding="utf-8").read(),
    long_description_content_type="text/markdown",
    install_requires=open("./requirements.txt").read(),
    package_data={"ray_stmod": ["data/*.json"]},
    entry_points={"console_scripts": ["stmod = ray_stmod.cli:main"]},
)
