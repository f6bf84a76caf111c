"""
Engine module for synthesizing and verifying time-optimal extremals.
"""

from .evaluator import Evaluator, SwitchingGeometry
from .evidence import Evidence, EvidenceCollector
from .extremals import ExtremalCandidate, SegmentTimes, SignBranch
from .planner import CandidatePlan, Planner, synthesize_optimal

__all__ = [
    "CandidatePlan",
    "Evaluator",
    "Evidence",
    "EvidenceCollector",
    "ExtremalCandidate",
    "Planner",
    "SegmentTimes",
    "SignBranch",
    "SwitchingGeometry",
    "synthesize_optimal",
]
