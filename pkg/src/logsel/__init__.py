"""Selecting subsystem-relevant log events by correlating anomaly scores of
daily event counts with anomaly scores of sensor series."""

__version__ = "0.1.0"
