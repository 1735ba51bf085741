# Copyright 2024 The photonbench authors
#
# Licensed under the Apache License, Version 2.0 (the 'License');
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an 'AS IS' BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.


import os
import re

import setuptools

PHOTONBENCH_VERSION_DESCRIBE = os.environ.get("PHOTONBENCH_VERSION_DESCRIBE")
VERSION_RE = r"(?P<major>0|[1-9]\d*)\.(?P<minor>0|[1-9]\d*)\.(?P<patch>0|[1-9]\d*)(?:\.(?P<post>post[1-9]\d*))?"

with open("photonbench/version.py", "r") as f:
    version_parts = re.search(VERSION_RE, f.read()).groups()
    VERSION = ".".join(filter(lambda x: x is not None, version_parts))


if PHOTONBENCH_VERSION_DESCRIBE:
    version_parts = re.match(VERSION_RE, PHOTONBENCH_VERSION_DESCRIBE)

    if not version_parts:
        raise RuntimeError("{!r} does not match version format {!r}".format(
            PHOTONBENCH_VERSION_DESCRIBE, VERSION_RE))

    VERSION = ".".join(filter(lambda x: x is not None, version_parts.groups()))


setuptools.setup(
    name='photonbench',
    zip_safe=False,
    version=VERSION,
    description='Benchmark suite and simulators for integrated quantum photonic qubits, sources and detectors.',
    long_description=open('README.md', 'r').read(),
    long_description_content_type='text/markdown',
    classifiers=[
        'Intended Audience :: Science/Research',
        'Natural Language :: English',
        'Topic :: Scientific/Engineering :: Physics',
        'Programming Language :: Python :: 3',
        'Programming Language :: Python :: 3.8',
        'Programming Language :: Python :: 3.9',
        'Programming Language :: Python :: 3.10',
        'Programming Language :: Python :: 3.11',
        'Programming Language :: Python :: 3.12',
    ],
    packages=['photonbench'],
    package_dir={'photonbench': 'photonbench'},
    package_data={'photonbench': ['data/*.json', 'data/configs/*.json']},
    entry_points={
        'console_scripts': [
            'photonbench = photonbench.__main__:main',
            'photonbench-validate = photonbench._validate:main',
            'photonbench-run = photonbench._run:main',
            'photonbench-sweep = photonbench._sweep:main',
            'photonbench-compare = photonbench._compare:main',
        ]
    },
    python_requires=">=3.8",
    install_requires=[
        'numpy>=1.17',
        'scipy>=1.4',
        'six',
        'looseversion'
    ],
    test_suite='tests'
)
