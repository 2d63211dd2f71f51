#!/usr/bin/env python3
"""
Transmission states
Scores every infected person by their depth in the contact graph and
sorts them into no-contact (1), local (2) and untraceable (3)
transmission. Persons whose source is unknown and who have no traced
infector are reported separately as state-4 suspects; their share of the
population is not estimated.

Scoring:
  - no resolvable infector, imported: 0
  - no resolvable infector, local: 2 (untraceable source)
  - no resolvable infector, transmission unknown: 0, flagged as suspect
  - otherwise: 1 + the highest score among the person's infectors
"""

import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence

import pandas as pd

from .case_series import date_span
from .contact_graph import ContactGraph
from .errors import DomainError, EpiKitError
from .metrics import NATIONAL
from .record_parser import PatientRecord, TransmissionType, region_of

logger = logging.getLogger(__name__)

UNTRACEABLE_SCORE = 2
STATE_COLUMNS = ["state1", "state2", "state3", "unclassified"]


@dataclass(frozen=True)
class TransmissionScore:
    person: int
    infection_transmission: int
    untraceable: bool = False
    source_unknown: bool = False

    @property
    def state(self) -> int:
        if self.source_unknown:
            return 4
        return min(self.infection_transmission, 2) + 1


@dataclass(frozen=True)
class StateAssignment:
    set1: FrozenSet[int]
    set2: FrozenSet[int]
    set3: FrozenSet[int]
    unclassified: FrozenSet[int]

    @property
    def classified(self) -> int:
        return len(self.set1) + len(self.set2) + len(self.set3)

    def __len__(self) -> int:
        return self.classified + len(self.unclassified)

    def state_of(self, person: int) -> Optional[int]:
        for state, members in enumerate((self.set1, self.set2, self.set3, self.unclassified), 1):
            if person in members:
                return state
        return None

    def as_dict(self) -> Dict[str, List[int]]:
        return {
            "set1": sorted(self.set1),
            "set2": sorted(self.set2),
            "set3": sorted(self.set3),
            "unclassified": sorted(self.unclassified),
        }


def _score_all(graph: ContactGraph) -> Dict[int, TransmissionScore]:
    scores: Dict[int, TransmissionScore] = {}
    for person in graph.topological_order():
        infectors = graph.infectors_of(person)
        if infectors:
            depth = max(scores[p].infection_transmission for p in infectors) + 1
            scores[person] = TransmissionScore(person, depth)
            continue
        kind = graph.records[person].transmission_type
        if kind is TransmissionType.IMPORTED:
            scores[person] = TransmissionScore(person, 0)
        elif kind is TransmissionType.LOCAL:
            scores[person] = TransmissionScore(person, UNTRACEABLE_SCORE, untraceable=True)
        else:
            scores[person] = TransmissionScore(person, 0, source_unknown=True)
    return scores


def transmission_scores(graph: ContactGraph) -> Dict[int, TransmissionScore]:
    """Scores for every node, computed once per graph."""
    return graph.memo("transmission_scores", _score_all)


def transmission_score(graph: ContactGraph, record: PatientRecord) -> TransmissionScore:
    """
    Score one person.

    Raises:
        DomainError: If the record is not part of the graph
    """
    scores = transmission_scores(graph)
    if record.patient_number not in scores:
        raise DomainError(f"P{record.patient_number} is not in the contact graph")
    return scores[record.patient_number]


def classify_states(records: Iterable[PatientRecord], graph: ContactGraph) -> StateAssignment:
    """
    Partition the infected population into transmission states.

    Args:
        records: The infected population
        graph: Contact graph built over (at least) these records

    Returns:
        StateAssignment whose four sets are disjoint and cover the records
    """
    members: Dict[int, List[int]] = {1: [], 2: [], 3: [], 4: []}
    population = set()
    for record in records:
        score = transmission_score(graph, record)
        members[score.state].append(score.person)
        population.add(score.person)

    assignment = StateAssignment(
        set1=frozenset(members[1]),
        set2=frozenset(members[2]),
        set3=frozenset(members[3]),
        unclassified=frozenset(members[4]),
    )
    covered = assignment.set1 | assignment.set2 | assignment.set3 | assignment.unclassified
    if covered != population or len(assignment) != len(population):
        raise EpiKitError("Transmission states do not partition the infected population")
    if assignment.unclassified:
        logger.info("%d person(s) with unknown source left unclassified", len(assignment.unclassified))
    return assignment


def _percent(part: int, whole: int) -> float:
    return 100.0 * part / whole if whole else 0.0


def _summary_row(region: str, people: Iterable[int], assignment: StateAssignment) -> Dict:
    counts = dict.fromkeys(STATE_COLUMNS, 0)
    for person in people:
        counts[STATE_COLUMNS[assignment.state_of(person) - 1]] += 1
    classified = counts["state1"] + counts["state2"] + counts["state3"]
    row = {"region": region, **counts, "classified": classified}
    for column in STATE_COLUMNS[:3]:
        row[f"{column}_pct"] = _percent(counts[column], classified)
    return row


def state_summary(assignment: StateAssignment, records: Sequence[PatientRecord]) -> List[Dict]:
    """
    Per-region state counts and percentages, national row last.

    Percentages are taken over classified persons, so the three of them
    sum to 100 whenever anyone is classified.
    """
    by_region: Dict[str, List[int]] = {}
    everyone = []
    for record in records:
        if assignment.state_of(record.patient_number) is None:
            continue
        by_region.setdefault(region_of(record), []).append(record.patient_number)
        everyone.append(record.patient_number)
    rows = [_summary_row(region, by_region[region], assignment) for region in sorted(by_region)]
    rows.append(_summary_row(NATIONAL, everyone, assignment))
    return rows


def daily_state_counts(records: Sequence[PatientRecord], assignment: StateAssignment) -> pd.DataFrame:
    """Cumulative persons per transmission state by announcement date."""
    dated = [(r.date_announced, assignment.state_of(r.patient_number)) for r in records]
    dated = [(day, state) for day, state in dated if state is not None]
    if not dated:
        empty = pd.DataFrame(columns=STATE_COLUMNS, dtype=int)
        empty.index.name = "date"
        return empty
    days = date_span(min(d for d, _ in dated), max(d for d, _ in dated))
    frame = pd.DataFrame(dated, columns=["date", "state"])
    counts = pd.crosstab(frame["date"], frame["state"])
    counts = counts.reindex(index=days, columns=[1, 2, 3, 4], fill_value=0).cumsum()
    counts.columns = STATE_COLUMNS
    counts.index.name = "date"
    return counts.astype(int)
