"""Figure rendering for qflow CSV outputs.

One module per figure plus a dispatcher; rendering is read-only and does no
computation beyond clipping and scaling for display.
"""

__version__ = "0.1.0"
