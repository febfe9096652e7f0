"""Reservation-based, deadline-aware IoT MAC simulator.

Thin re-export of the compiled core: traffic generation, least-laxity-first
scheduling and admission control, contention-probability and frame-split
adaptation, a slotted CSMA/CA baseline, and the experiment harness.
"""

from iotmac._core import *  # noqa: F401,F403
from iotmac._core import __doc__ as _core_doc  # noqa: F401

__version__ = "0.1.0"
