"""Direction decision from the two uniform-channel tests."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

from .core import ContingencyTable, Kind
from .errors import DegenerateTable
from .estimation import EstimationConfig
from .testing import TestResult, lrt_ucm

TIE_TOL = 1e-9


class Verdict(str, Enum):
    X_TO_Y = "XtoY"
    Y_TO_X = "YtoX"
    UNDECIDED_WRONG_MODEL = "UndecidedWrongModel"
    UNDECIDED_BOTH_POSSIBLE = "UndecidedBothPossible"

    @property
    def directional(self) -> bool:
        return self in (Verdict.X_TO_Y, Verdict.Y_TO_X)


@dataclass(frozen=True)
class DecisionConfig:
    alpha: float = 0.05
    forced: bool = False
    x_cyclic: bool = False
    y_cyclic: bool = False
    estimation: EstimationConfig = field(default_factory=EstimationConfig)

    def __post_init__(self):
        if not 0 < self.alpha < 1:
            raise ValueError("alpha must lie strictly between 0 and 1")


@dataclass(frozen=True)
class Decision:
    verdict: Verdict
    p_xy: float
    p_yx: float
    g2_xy: float
    g2_yx: float
    forward: TestResult
    backward: TestResult

    def to_dict(self):
        return {
            "verdict": self.verdict.value,
            "p_xy": self.p_xy,
            "p_yx": self.p_yx,
            "g2_xy": self.g2_xy,
            "g2_yx": self.g2_yx,
            "details": {"X->Y": self.forward.to_dict(), "Y->X": self.backward.to_dict()},
        }


def verdict_from_pvalues(p_xy, p_yx, alpha=0.05, forced=False, g2_xy=None, g2_yx=None) -> Verdict:
    """Four-outcome rule, or a forced choice between the two directions.

    In forced mode the statistics are compared when given: both tests share
    the same degrees of freedom, so ``g2_xy <= g2_yx`` orders the directions
    exactly like ``p_xy >= p_yx`` but survives p-values underflowing to 0.
    Ties go to X->Y; statistics within ``TIE_TOL`` (relative) count as tied,
    since e.g. a 2x2 table whose rows share their ordering gives the
    independence statistic in both directions up to rounding.
    """
    if forced:
        if g2_xy is not None and g2_yx is not None:
            tied = math.isclose(g2_xy, g2_yx, rel_tol=TIE_TOL, abs_tol=TIE_TOL)
            return Verdict.X_TO_Y if tied or g2_xy < g2_yx else Verdict.Y_TO_X
        return Verdict.X_TO_Y if p_xy >= p_yx else Verdict.Y_TO_X
    fits_xy, fits_yx = p_xy >= alpha, p_yx >= alpha
    if fits_xy and not fits_yx:
        return Verdict.X_TO_Y
    if fits_yx and not fits_xy:
        return Verdict.Y_TO_X
    if fits_xy:
        return Verdict.UNDECIDED_BOTH_POSSIBLE
    return Verdict.UNDECIDED_WRONG_MODEL


def decide(table, config: DecisionConfig | None = None) -> Decision:
    """Run the uniform-channel test in both directions and apply the decision rule.

    Rows index X and columns index Y.  Empty categories are pruned first.  The
    effect-side flag picks the channel family: ``y_cyclic`` governs the X->Y
    test and ``x_cyclic`` the Y->X test.
    """
    config = config or DecisionConfig()
    raw = table if isinstance(table, ContingencyTable) else ContingencyTable(table)
    pruned = raw.pruned()
    if min(pruned.shape) < 2:
        raise DegenerateTable(f"table {raw.shape} has fewer than 2 populated categories per axis")
    kind_y = Kind.CYCLIC if config.y_cyclic else Kind.GENERAL
    kind_x = Kind.CYCLIC if config.x_cyclic else Kind.GENERAL
    fwd = lrt_ucm(pruned, kind_y, config.estimation, label="X->Y")
    bwd = lrt_ucm(pruned.T, kind_x, config.estimation, label="Y->X")
    verdict = verdict_from_pvalues(
        fwd.p_value, bwd.p_value, config.alpha, config.forced, fwd.g2, bwd.g2
    )
    return Decision(verdict, fwd.p_value, bwd.p_value, fwd.g2, bwd.g2, fwd, bwd)
