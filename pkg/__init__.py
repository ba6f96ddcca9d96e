"""immse-lab - exact-enumeration laboratory for I-MMSE relations in random linear estimation"""

__version__ = "0.1.0"
