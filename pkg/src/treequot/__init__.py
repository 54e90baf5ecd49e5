"""Bottom-up quotients of regular tree languages."""

__version__ = "0.1.0"
