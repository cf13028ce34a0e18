from setuptools import setup, find_packages

setup(
    name="LowCon-Subsampling",
    version="0.1.0",
    author="Akash",
    author_email="akashjoy2023@gmail.com",
    packages=find_packages(exclude=["tests"]),
    install_requires=["numpy", "scipy", "pandas", "from_root", "python-dotenv"],
    entry_points={"console_scripts": ["lowcon=app:main"]},
    py_modules=["app"],
)
