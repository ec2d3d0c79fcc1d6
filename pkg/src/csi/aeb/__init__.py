from .rss import (
    INPUTS,
    OUTPUTS,
    InvalidParams,
    NegativeVelocity,
    RssParams,
    assumption_spec,
    rss_clauses,
    rss_guarantee,
    rss_safe_distance,
    rss_spec,
)
from .sim import CHANNELS, NuisanceParams, ScenarioParams, SimConstants, simulate

__all__ = [name for name in dir() if not name.startswith("_")]
