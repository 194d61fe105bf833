"""chi2tex: semi-automatic ChiWriter 3.x to LaTeX conversion.

The package splits the job the way the workflow splits it: parsing
(``reader``), symbol semantics (``fonts``), the AUTO/MANUAL sieve
(``classify``), the grid-to-LaTeX transducer (``translate``), the human
review loop (``sidecar``, ``server``, ``render``), typographic cleanup
(``postprocess``), and batch plumbing (``pipeline``, ``cli``).
"""

__version__ = "0.1.0"
