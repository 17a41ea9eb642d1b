"""unscathed: the probability that a random sniper in the plane is left unscathed."""

__version__ = "0.1.0a1"
