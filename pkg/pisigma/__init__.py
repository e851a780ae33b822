"""pisigma: exact symbolic summation in difference fields"""

__version__ = "0.1.0"
