"""Deterministic multi-object video segmentation tracking from mask proposals and optical flow."""

__version__ = "0.1.0"
