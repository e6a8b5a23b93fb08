"""CDN replica placement algorithms and content-location protocol simulation."""

__version__ = "0.1.0"
