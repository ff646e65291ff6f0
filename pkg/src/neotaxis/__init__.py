"""neotaxis: habituation-based novelty filters on a simulated light-seeking robot."""

from .arena import FlashPattern, LightSource, WorldState
from .attention import AttentionDecision, execute, select
from .clustering import ClassifyResult, ClustererConfig, ClustererState
from .habituation import HabituationParams, SynapseState, simulate_trace, steady_state, step_synapse
from .novelty import FilterConfig, NoveltyFilter, NoveltyReport, is_novel

__version__ = "0.1.0"

__all__ = [
    "AttentionDecision",
    "ClassifyResult",
    "ClustererConfig",
    "ClustererState",
    "FilterConfig",
    "FlashPattern",
    "HabituationParams",
    "LightSource",
    "NoveltyFilter",
    "NoveltyReport",
    "SynapseState",
    "WorldState",
    "execute",
    "is_novel",
    "select",
    "simulate_trace",
    "steady_state",
    "step_synapse",
]
