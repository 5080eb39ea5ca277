from setuptools import setup, find_packages

setup(
    name="qborel_toolkit",
    version="1.0.0",
    packages=find_packages(exclude=["tests", "tests.*"]),
    install_requires=[
        "python-dotenv>=1.0.0",
        "numpy>=1.20.0",
        "sympy>=1.12",
        "rich>=13.0.0",
        "pydantic>=2.0.0",
    ],
    entry_points={
        "console_scripts": [
            "qborel=src.cli:main",
        ],
    },
    python_requires=">=3.8",
)
