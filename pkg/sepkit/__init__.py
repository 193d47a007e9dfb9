import logging

__version__ = '0.1.0'

# Library code never configures output; the CLI adds a stderr handler.
logging.getLogger('sepkit').addHandler(logging.NullHandler())
