"""Outage analysis of rate-splitting grant-free uplink access."""

from ._crsma import *  # noqa: F401,F403
from ._crsma import __doc__  # noqa: F401
