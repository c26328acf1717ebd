"""
LZHM compression laboratory
"""
__version__ = "1.0.0"
