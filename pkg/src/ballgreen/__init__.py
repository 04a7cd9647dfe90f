"""ballgreen - Green operator of the Dirichlet problem on the unit ball and its norms."""

__version__ = "0.1.0"
