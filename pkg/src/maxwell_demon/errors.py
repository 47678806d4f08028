"""Exception types.  All derive from ``ValueError`` so callers may catch broadly."""


class MaxwellDemonError(ValueError):
    pass


class ShapeMismatch(MaxwellDemonError):
    pass


class DimMismatch(ShapeMismatch):
    pass


class SizeMismatch(ShapeMismatch):
    pass


class NotHermitian(MaxwellDemonError):
    pass


class InvalidState(MaxwellDemonError):
    pass


class InvalidEffect(MaxwellDemonError):
    pass


class InvalidDistribution(MaxwellDemonError):
    pass


class InvalidProjectionFamily(MaxwellDemonError):
    """Raised with every violated projector-family invariant.

    ``violations`` is a list of ``(kind, indices)`` pairs where ``kind`` is
    one of ``"NotIdempotent"``, ``"NotHermitian"``, ``"NotOrthogonal"`` or
    ``"NotComplete"``.
    """

    def __init__(self, violations):
        self.violations = list(violations)
        text = "; ".join(f"{kind}{tuple(idx)}" for kind, idx in self.violations)
        super().__init__(f"invalid projection family: {text}")

    @property
    def kinds(self) -> set:
        return {kind for kind, _ in self.violations}


class NotUnitary(MaxwellDemonError):
    pass


class NotTracePreserving(MaxwellDemonError):
    pass


class TraceIncreasing(MaxwellDemonError):
    pass


class LabelMismatch(MaxwellDemonError):
    pass


class UnknownOutcome(MaxwellDemonError, KeyError):
    pass


class NotMaxwell(MaxwellDemonError):
    """The instrument is not of conditional-action form.

    ``reason`` is ``"NotPure"`` or ``"NotSharp"``; ``outcome`` is the index of
    the first offending outcome.
    """

    def __init__(self, reason: str, outcome: int):
        self.reason = reason
        self.outcome = outcome
        super().__init__(f"{reason}({outcome})")


class InvalidPartition(MaxwellDemonError):
    pass


class NotBlockInjective(MaxwellDemonError):
    pass


class DimensionTooLarge(MaxwellDemonError):
    pass


class ParamOutOfRange(MaxwellDemonError):
    pass


class DilationMismatch(MaxwellDemonError):
    pass
