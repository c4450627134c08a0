"""Signal-correlated social norms in matrix games.

Library layers, bottom up: probability-matrix algebra (``probkit``),
reward matrices and dilemma classification (``games``), norm
representation and best-response analysis (``norms``), norm payoff
matrices (``payoff``), replicator dynamics and stability analysis
(``replicator``), parameter-sweep maps (``sweep``), the closed-loop
finite-population simulation (``abm``), opinion-similarity games
(``partisan``), and the command-line interface (``cli``).
"""

__version__ = "0.1.0"
