__version__ = '0.1.0'
__short_version__ = '.'.join(__version__.split('.')[:2])
