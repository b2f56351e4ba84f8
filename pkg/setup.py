#!python3.8
# -*- coding: utf-8 -*-
from setuptools import setup
from ifreq import __version__
from pathlib import Path


README_PATH = Path(__file__).parent / 'README.md'


setup(
    name='ifreq',
    version=__version__,
    description='Instantaneous complex phase and frequency of three-phase '
                'signals (analytic signal, space vector and geometric '
                'formulations)',
    long_description=README_PATH.read_text(),
    long_description_content_type='text/markdown',
    packages=['ifreq',
              'ifreq.signal_model'],
    python_requires='>=3.8',
    install_requires=[
        'numpy',
        'scipy',
        'pandas>=1.5',
    ],
    classifiers=[
        'Development Status :: 3 - Alpha',
        'Operating System :: OS Independent',
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: MIT License',
        'Programming Language :: Python :: 3.8',
        'Programming Language :: Python :: 3.9',
        'Programming Language :: Python :: 3.10',
        'Programming Language :: Python :: 3.11',
        'Programming Language :: Python :: 3.12',
        'Topic :: Scientific/Engineering',
    ],
    entry_points = {
        'console_scripts': [
            'ifreq = ifreq.cli:main',
        ]
    },
)
