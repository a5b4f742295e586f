"""Exact tools for coded caching and index coding.

Everything numeric is exact: rationals via gmpy2/fractions, GF(2) linear
algebra on int bitmasks, and a rational simplex solver. No floats enter any
bound computation; floats appear only in printed decimal approximations.
"""

__version__ = "0.1.0"

from cachekit.errors import DecodeError, ResourceLimitError, SchemaError

__all__ = ["__version__", "DecodeError", "ResourceLimitError", "SchemaError"]
