"""
framekit - frames, semi-frames and fusion frames in finite truncations of a Hilbert space.
"""

__version__ = "1.0.0"
