import os
import setuptools

NAME = 'frameext'

version = {}
with open(os.path.join(os.path.dirname(__file__), NAME, '__version__.py')) as f:
    exec(f.read(), version)

setuptools.setup(
    name=NAME,
    version=version['__version__'],
    description='Finite frame extensions: Parseval completions, excess and truncation trends.',
    long_description=open('README.md', encoding='utf-8').read().strip(),
    long_description_content_type='text/markdown',
    packages=setuptools.find_packages(exclude=['tests', 'docs']),
    entry_points={'console_scripts': ['{name}={name}.cli:main'.format(name=NAME)]},
    python_requires='>=3.10',
    install_requires=[
        'numpy',
        'scipy',
        'docstring_parser',
    ],
    extras_require={
        'test': ['pytest', 'pytest-cov', 'hypothesis'],
        'doc': ['sphinx', 'sphinx_rtd_theme'],
    },
    license='MIT License',
    keywords='frame parseval tight completion excess deficit hilbert space linear algebra')
