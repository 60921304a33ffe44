"""Machine verification of the higher Auslander formula at desk scale."""
__version__ = "0.1.0"
