"""otfilter: sequential state-parameter estimation with transport resampling.

State ensembles per parameter hypothesis are propagated by an ensemble
Kalman-Bucy filter, hypothesis weights follow importance-weight dynamics,
and whenever the effective number of hypotheses collapses the hypotheses
and their ensembles are resampled through an optimal-transport transform.
"""

__version__ = "0.1.0"
