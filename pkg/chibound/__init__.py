"""chibound: exact verification of the chromatic bound for {3K1, K1+C4}-free graphs."""

__version__ = "0.1.0"
