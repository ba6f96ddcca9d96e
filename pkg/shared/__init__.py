"""Shared configuration, data models, validation and helpers for immse-lab"""

__version__ = "0.1.0"
