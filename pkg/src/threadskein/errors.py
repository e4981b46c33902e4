"""Exception hierarchy.

Every error carries a stable ``code`` string so the CLI and the verification
reports can name failures without depending on class names.
"""


class SkeinError(Exception):
    code = "ERROR"

    def __init__(self, message="", **details):
        super().__init__(message or self.code)
        self.details = details


def _make(name, code, base=SkeinError):
    return type(name, (base,), {"code": code, "__doc__": code})


InvalidPoint = _make("InvalidPoint", "INVALID_POINT")
Degenerate = _make("Degenerate", "DEGENERATE")
NotSeparableAtTruncation = _make("NotSeparableAtTruncation", "NOT_SEPARABLE_AT_TRUNCATION")
InvalidGamma = _make("InvalidGamma", "INVALID_GAMMA")
GammaExhausted = _make("GammaExhausted", "GAMMA_EXHAUSTED")

NotEndpointFixing = _make("NotEndpointFixing", "NOT_ENDPOINT_FIXING")
PreconditionGap = _make("PreconditionGap", "PRECONDITION_GAP")
NotMonotone = _make("NotMonotone", "NOT_MONOTONE")
PreconditionFailed = _make("PreconditionFailed", "PRECONDITION_FAILED")
NotInN = _make("NotInN", "NOT_IN_N")
LipIncreased = _make("LipIncreased", "LIP_INCREASED")
NoNearbyPoint = _make("NoNearbyPoint", "NO_NEARBY_POINT")

FactorialGuard = _make("FactorialGuard", "FACTORIAL_GUARD")
DeepeningExhausted = _make("DeepeningExhausted", "DEEPENING_EXHAUSTED")
MeasureViolation = _make("MeasureViolation", "MEASURE_VIOLATION")
SearchGuard = _make("SearchGuard", "SEARCH_GUARD")

GlueNotIsometric = _make("GlueNotIsometric", "GLUE_NOT_ISOMETRIC")
NotMaterialized = _make("NotMaterialized", "NOT_MATERIALIZED")
CriterionMismatch = _make("CriterionMismatch", "CRITERION_MISMATCH")
OutsideStabilityBall = _make("OutsideStabilityBall", "OUTSIDE_STABILITY_BALL")
Ambiguous = _make("Ambiguous", "AMBIGUOUS")
NotIsolated = _make("NotIsolated", "NOT_ISOLATED")
PairGuard = _make("PairGuard", "PAIR_GUARD")
