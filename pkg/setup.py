from setuptools import setup

version = '0.1.0'

try:
    import pypandoc
    long_description = pypandoc.convert_file('README.md', 'rst')
except (IOError, ImportError, OSError):
    long_description = open('README.md').read()

setup(name='sepkit',
      version=version,
      description='Separability criteria and explicit separable ensembles for two- and three-qubit states',
      long_description=long_description,
      license='MIT',
      classifiers=[
          'Development Status :: 4 - Beta',
          'Intended Audience :: Science/Research',
          'License :: OSI Approved :: MIT License',
          'Programming Language :: Python :: 3',
          'Topic :: Scientific/Engineering :: Physics',
      ],
      keywords='quantum separability entanglement partial-transpose density-matrix',
      packages=['sepkit'],
      install_requires=[
          'numpy >= 1.17',
          'scipy >= 1.6',
          'jsonschema',
      ],
      entry_points={
          'console_scripts': [
              'sepkit = sepkit.cli:main',
          ],
      },
      zip_safe=False)
