"""Shared test fixtures: canonical assessment scenarios and index builders."""

from __future__ import annotations

import random
from typing import Any, Mapping

from agility import default_index
from agility.index_model import MeasurementIndex, load_index
from agility.persistence import new_session
from agility.pipeline import AssessmentSession, LevelPolicy

# Hand-transcribed placement of the default grid: (name, level, principle id,
# limiting). Kept independent of the package's own catalog tables on purpose —
# the structural audit compares the built index against this list.
EXPECTED_PLACEMENT: list[tuple[str, int, str, bool]] = [
    ("Reflect and tune process", 1, "embrace-change", False),
    ("Collaborative planning", 1, "deliver-frequently", False),
    ("Collaborative teams", 1, "human-centric", False),
    ("Empowered and motivated teams", 1, "human-centric", False),
    ("Coding standards", 1, "technical-excellence", False),
    ("Knowledge sharing tools", 1, "technical-excellence", False),
    ("Task volunteering", 1, "technical-excellence", False),
    ("Customer commitment to work with developing team", 1, "customer-collaboration", True),
    ("Evolutionary requirements", 2, "embrace-change", False),
    ("Continuous delivery", 2, "deliver-frequently", False),
    ("Planning at different levels", 2, "deliver-frequently", False),
    ("Software configuration management", 2, "technical-excellence", False),
    ("Tracking iteration progress", 2, "technical-excellence", False),
    ("No big design up front (BDUF)", 2, "technical-excellence", False),
    ("Customer contract reflective of evolutionary development", 2, "customer-collaboration", True),
    ("Risk driven iterations", 3, "deliver-frequently", False),
    ("Plan features not tasks", 3, "deliver-frequently", False),
    ("Maintain a list of all features and their status (backlog)", 3, "deliver-frequently", False),
    ("Self organizing teams", 3, "human-centric", False),
    ("Frequent face-to-face communication", 3, "human-centric", True),
    ("Continuous integration", 3, "technical-excellence", False),
    ("Continuous improvement (refactoring)", 3, "technical-excellence", False),
    ("Unit tests", 3, "technical-excellence", False),
    ("30% of level 2 and level 3 people", 3, "technical-excellence", True),
    ("Client driven iterations", 4, "embrace-change", False),
    ("Continuous customer satisfaction feedback", 4, "embrace-change", False),
    ("Smaller and more frequent releases (4-8 weeks)", 4, "deliver-frequently", False),
    ("Adaptive planning", 4, "deliver-frequently", False),
    ("Daily progress tracking meetings", 4, "technical-excellence", False),
    ("Agile documentation", 4, "technical-excellence", False),
    ("User stories", 4, "technical-excellence", False),
    ("Customer immediately accessible", 4, "customer-collaboration", True),
    ("Customer contract revolves around commitment of collaboration", 4, "customer-collaboration", True),
    ("Low process ceremony", 5, "embrace-change", False),
    ("Agile project estimation", 5, "deliver-frequently", False),
    ("Ideal agile physical setup", 5, "human-centric", True),
    ("Test driven development", 5, "technical-excellence", False),
    ("Paired programming", 5, "technical-excellence", False),
    ("No/minimal number of level -1 or 1b people on team", 5, "technical-excellence", True),
    ("Frequent face-to-face interaction between developers & users (collocated)", 5, "customer-collaboration", True),
]

EXPECTED_LEVEL_NAMES = {1: "Collaborative", 2: "Evolutionary", 3: "Effective", 4: "Adaptive", 5: "Ambient"}

EXPECTED_PRINCIPLE_NAMES = {
    "Embrace change to deliver customer value",
    "Plan and deliver software frequently",
    "Human centric",
    "Technical excellence",
    "Customer collaboration",
}

EXPECTED_FACTOR_NAMES = {
    "Inappropriate need for agility",
    "Lack of sufficient funds",
    "Absence of executive support",
}

# Per answer kind, the value that lands a characteristic on the target band
# when every one of its indicators is answered with it.
BAND_VALUES: dict[str, dict[str, Any]] = {
    "NA": {"likert5": 1, "binary": False, "percent": 0},
    "PA": {"likert5": 3, "binary": None, "percent": 50},
    "LA": {"likert5": 4, "binary": None, "percent": 75},
    "FA": {"likert5": 5, "binary": True, "percent": 100},
}


def answer_all(
    session: AssessmentSession,
    targets: Mapping[str, str] | None = None,
    respondent: str = "resp-1",
) -> None:
    """Answer every indicator, aiming each characteristic at a target band.

    Characteristics default to FA. Intermediate targets (PA/LA) are only
    valid for characteristics whose indicators are all likert5 or percent.
    """
    targets = dict(targets or {})
    for indicator in session.index.indicators:
        band = targets.get(indicator.characteristic.id, "FA")
        value = BAND_VALUES[band][indicator.answer_kind.value]
        if value is None:
            raise AssertionError(
                f"band {band} is not constructible for binary indicator {indicator.id}"
            )
        session.responses.record(indicator.id, respondent, value)


# The printed matrix scenario: collaborative planning's five characteristics
# band LA, FA, FA, PA, NA; the level-3 limiting practice fails on proximity.
WORKED_EXAMPLE_TARGETS = {
    "near-team-proximity": "NA",
    "transparency-of-management": "LA",
    "small-power-distance": "FA",
    "developers-buy-in": "FA",
    "collaborative-management-style": "PA",
    "management-buy-in": "NA",
}


def worked_example_session(policy: LevelPolicy = LevelPolicy.PAPER_LITERAL) -> AssessmentSession:
    """Fully answered session reproducing the worked example: T=3, R=1."""
    session = new_session(default_index(), policy=policy)
    answer_all(session, WORKED_EXAMPLE_TARGETS)
    return session


def gate_blocked_session() -> AssessmentSession:
    """Executive sponsorship at NA: the stage 1 gate must say no-go."""
    session = new_session(default_index())
    answer_all(session, {"executive-sponsorship": "NA"})
    return session


def all_clear_session(policy: LevelPolicy = LevelPolicy.PAPER_LITERAL) -> AssessmentSession:
    """Everything FA: gate passes, T=5, R=5."""
    session = new_session(default_index())
    answer_all(session)
    return session


TINY_INDEX_DOC: dict[str, Any] = {
    "meta": {"name": "tiny", "version": "0.1"},
    "levels": [
        {"rank": 1, "name": "First", "objective": "Walk"},
        {"rank": 2, "name": "Second", "objective": "Run"},
    ],
    "principles": [
        {"id": "people", "name": "People first"},
        {"id": "craft", "name": "Craft"},
    ],
    "characteristics": [
        {"id": "shared-goals", "description": "Shared goals", "scope": "organizational", "controllable": True},
        {"id": "review-habit", "description": "Review habit", "scope": "organizational", "controllable": True},
        {"id": "site-access", "description": "Site access", "scope": "project", "controllable": False},
        {"id": "sponsor-support", "description": "Sponsor support", "scope": "organizational", "controllable": False},
    ],
    "indicators": [
        {"id": "shared-goals-1", "question": "Are goals shared?", "characteristic": "shared-goals",
         "respondent_role": "manager", "answer_kind": "likert5", "weight": 2},
        {"id": "shared-goals-2", "question": "Do teams know the goals?", "characteristic": "shared-goals",
         "respondent_role": "developer", "answer_kind": "percent"},
        {"id": "review-habit-1", "question": "Are reviews routine?", "characteristic": "review-habit",
         "respondent_role": "developer", "answer_kind": "likert5"},
        {"id": "site-access-1", "question": "Can the team reach the site?", "characteristic": "site-access",
         "respondent_role": "assessor", "answer_kind": "binary"},
        {"id": "sponsor-support-1", "question": "Is the sponsor engaged?", "characteristic": "sponsor-support",
         "respondent_role": "assessor", "answer_kind": "likert5"},
    ],
    "practices": [
        {"id": "goal-alignment", "name": "Goal alignment", "level": 1, "principle": "people",
         "limiting": False, "characteristics": ["shared-goals"]},
        {"id": "peer-review", "name": "Peer review", "level": 2, "principle": "craft",
         "limiting": False, "characteristics": ["review-habit", "shared-goals"]},
        {"id": "onsite-work", "name": "On-site work", "level": 2, "principle": "people",
         "limiting": True, "characteristics": ["site-access"]},
    ],
    "factors": [
        {"id": "no-sponsor", "name": "No sponsor", "characteristics": ["sponsor-support"]},
    ],
}


def tiny_index() -> MeasurementIndex:
    return load_index(TINY_INDEX_DOC)


# --- random generators (seeded; used by round-trip and monotonicity suites) ---

_KINDS = ["likert5", "binary", "percent"]
_ROLES = ["manager", "developer", "assessor"]


def random_index_doc(rng: random.Random) -> dict[str, Any]:
    """A small random index document that satisfies every invariant."""
    n_levels = rng.randint(2, 4)
    n_principles = rng.randint(2, 3)
    levels = [
        {"rank": r, "name": f"Level{r}", "objective": f"Objective {r}"}
        for r in range(1, n_levels + 1)
    ]
    principles = [{"id": f"pr-{i}", "name": f"Principle {i}"} for i in range(n_principles)]

    characteristics: list[dict[str, Any]] = []
    indicators: list[dict[str, Any]] = []
    practices: list[dict[str, Any]] = []

    def add_characteristic(scope: str) -> str:
        cid = f"char-{len(characteristics)}"
        characteristics.append({
            "id": cid,
            "description": f"Characteristic {len(characteristics)}",
            "scope": scope,
            "controllable": rng.random() < 0.7,
            "origin": rng.choice(["core", "authored"]),
        })
        for _ in range(rng.randint(1, 2)):
            weight = rng.choice([1, 1, 2, 0.5])
            indicators.append({
                "id": f"ind-{len(indicators)}",
                "question": f"Question {len(indicators)}?",
                "characteristic": cid,
                "respondent_role": rng.choice(_ROLES),
                "answer_kind": rng.choice(_KINDS),
                "weight": weight,
            })
        return cid

    for rank in range(1, n_levels + 1):
        for _ in range(rng.randint(1, 3)):
            limiting = rng.random() < 0.3
            chars = [add_characteristic("project" if limiting else "organizational")]
            if rng.random() < 0.4:
                chars.append(add_characteristic("organizational"))
            practices.append({
                "id": f"prac-{len(practices)}",
                "name": f"Practice {len(practices)}",
                "level": rank,
                "principle": rng.choice(principles)["id"],
                "limiting": limiting,
                "characteristics": chars,
            })

    factors = [
        {
            "id": f"factor-{i}",
            "name": f"Factor {i}",
            "characteristics": [add_characteristic("organizational")],
        }
        for i in range(rng.randint(1, 2))
    ]
    return {
        "meta": {"name": f"random-{rng.randint(0, 10**6)}", "version": "1.0"},
        "levels": levels,
        "principles": principles,
        "characteristics": characteristics,
        "indicators": indicators,
        "practices": practices,
        "factors": factors,
    }


def random_value(rng: random.Random, kind: str) -> Any:
    if kind == "likert5":
        return rng.randint(1, 5)
    if kind == "binary":
        return rng.random() < 0.5
    return rng.randint(0, 100)


def fill_random_answers(
    session: AssessmentSession, rng: random.Random, respondents: int = 1
) -> None:
    """Answer every indicator with random in-range values."""
    for indicator in session.index.indicators:
        for n in range(respondents):
            session.responses.record(
                indicator.id, f"resp-{n + 1}", random_value(rng, indicator.answer_kind.value)
            )


def raised_value(kind: str, value: Any) -> Any | None:
    """The next value up for an answer, or None if already at the maximum."""
    if kind == "likert5":
        return value + 1 if value < 5 else None
    if kind == "binary":
        return True if value is False else None
    return min(100, value + 17) if value < 100 else None
