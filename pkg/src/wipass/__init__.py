"""Link-level Monte Carlo simulation of wireless-fed pinching-antenna systems."""

__version__ = "0.1.0"
