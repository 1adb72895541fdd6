from setuptools import setup, find_packages

setup(
    name="traceable_peks_system",
    version="0.1",
    packages=find_packages(include=["src", "src.*"]),
    install_requires=[
        "charm-crypto",
        "phe",
        "gmpy2",
        "numpy",
        "pandas",
        "aiofiles",
        "python-dotenv",
        "matplotlib",
        "seaborn",
        "openpyxl",
        "pytest",
        "pytest-asyncio",
        "pytest-cov"
    ],
    entry_points={
        "console_scripts": ["tpeks=src.app:main"],
    },
)
