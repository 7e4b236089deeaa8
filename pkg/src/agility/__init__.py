"""Agility: a tailorable agile measurement index and staged adoption assessment.

The package pairs a declarative measurement index (levels x principles of
practices, measured through role-designated indicator questions) with a
four-stage pipeline: a go/no-go gate over discontinuing factors, a
project-level target agility level, an organizational readiness level, and a
reconciliation step that turns the two into a concrete adoption plan.
"""

from .errors import EngineError
from .index_model import (
    AgileLevel,
    AgilePrinciple,
    AnswerKind,
    Characteristic,
    DiscontinuingFactor,
    Indicator,
    MeasurementIndex,
    Practice,
    Role,
    Scope,
    default_index,
    default_index_document,
    load_index,
    practices_at_or_below,
    serialize_index,
    validate_index,
)
from .pipeline import (
    AssessmentSession,
    Decision,
    LevelPolicy,
    ReconciliationOption,
    Scenario,
    SessionState,
    Stage1Result,
    Stage2Result,
    Stage3Result,
    Stage4Result,
    rerun_stage,
    run_stage1,
    run_stage2,
    run_stage3,
    run_stage4,
    what_if,
)
from .scoring import (
    AchievementBand,
    Answer,
    CharacteristicScore,
    FactorReport,
    PracticeReadiness,
    ResponseSet,
    band_of,
    factor_presence,
    normalize_answer,
    practice_readiness,
    score_characteristic,
)

__version__ = "0.1.0"

__all__ = [
    "AchievementBand",
    "AgileLevel",
    "AgilePrinciple",
    "Answer",
    "AnswerKind",
    "AssessmentSession",
    "Characteristic",
    "CharacteristicScore",
    "Decision",
    "DiscontinuingFactor",
    "EngineError",
    "FactorReport",
    "Indicator",
    "LevelPolicy",
    "MeasurementIndex",
    "Practice",
    "PracticeReadiness",
    "ReconciliationOption",
    "ResponseSet",
    "Role",
    "Scenario",
    "Scope",
    "SessionState",
    "Stage1Result",
    "Stage2Result",
    "Stage3Result",
    "Stage4Result",
    "band_of",
    "default_index",
    "default_index_document",
    "factor_presence",
    "load_index",
    "normalize_answer",
    "practice_readiness",
    "practices_at_or_below",
    "rerun_stage",
    "run_stage1",
    "run_stage2",
    "run_stage3",
    "run_stage4",
    "score_characteristic",
    "serialize_index",
    "validate_index",
    "what_if",
]
