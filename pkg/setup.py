from setuptools import setup

extras = {
    'docs': [
        'sphinx==4.4.0',
        'typing-extensions',
    ],
    'test': [
        'pytest',
    ],
}

setup(
    name="veechenum",
    version="0.1.0",
    description="Exact enumeration of Veech group cusps, pseudo-Anosov maps and their Markov partitions",
    long_description=open("README.md").read(),
    long_description_content_type="text/markdown",
    author="BlackThunder",
    license="MIT",
    classifiers=[
        "License :: OSI Approved :: MIT License",
        "Intended Audience :: Science/Research",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.8",
        "Operating System :: OS Independent",
        "Topic :: Scientific/Engineering :: Mathematics",
        "Typing :: Typed",
    ],
    packages=["veechenum", "veechenum.lib"],
    package_data={
     'veechenum.lib': ['*'],
    },
    include_package_data=True,
    entry_points={
        'console_scripts': [
            'veechenum=veechenum.__main__:run',
            ]
        },
    install_requires=["orjson", "sympy", "networkx"],
    extras_require=extras,
    python_requires=">=3.8",
)
