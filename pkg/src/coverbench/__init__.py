"""coverbench: branched covers of surfaces as permutation monodromy data."""

__version__ = "0.1.0"
