"""Trajectory refinement from demonstrations under a mean +/- sigma envelope.

Demonstrations are smoothed, expressed relative to the mandrel, aligned with
DTW and summarised by a per-step mean and standard deviation. A deep
Q-learning agent then picks one of 126 lattice targets inside the envelope
at every step; rewards favour short, straight, collision-free motion of a
7-DoF arm.
"""

__version__ = "0.1.0"
