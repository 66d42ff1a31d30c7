"""Forward models for frequency-upconversion single-photon detectors near 2 um."""

__version__ = "0.1.0"
