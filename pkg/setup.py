from setuptools import setup, find_packages

setup(
    name="wse-di",
    version="0.1",
    packages=find_packages(exclude=["tests", "tests.*", "examples", "examples.*"]),
    py_modules=["main"],
   install_requires = [
    "pandas==2.2.3",
    "numpy==2.2.4",
    "scipy==1.15.2",
    "python-dotenv==1.0.1"
],
    extras_require={
        "test": ["pytest==8.3.5"]
    },
    entry_points={
        "console_scripts": ["wse-di=main:main"]
    },

    python_requires=">=3.10",
)
