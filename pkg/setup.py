"""
Setup script for deltakit
"""
from setuptools import setup, find_packages

with open("README.md", "r", encoding="utf-8") as fh:
    long_description = fh.read()

setup(
    name="deltakit",
    version="1.0.0",
    author="deltakit Team",
    description="Finite Δ-system extraction, centeredness checks and witness-point construction",
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=find_packages(exclude=["tests", "tests.*"]),
    classifiers=[
        "Development Status :: 4 - Beta",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
    python_requires=">=3.9",
    install_requires=[
        "click>=8.1.7",
        "numpy>=1.22",
    ],
    extras_require={
        "test": [
            "pytest>=7.4",
            "hypothesis>=6.88",
        ],
    },
    entry_points={
        "console_scripts": [
            "deltakit=src.app:main",
        ],
    },
)
