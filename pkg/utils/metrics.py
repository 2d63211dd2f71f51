#!/usr/bin/env python3
"""
Spread metrics
Reproduction number from contact-graph out-degrees, case fatality rate
and per-day regional extremes of both.
"""

import logging
from dataclasses import dataclass
from datetime import date
from typing import Dict, Iterable, List, Optional, Sequence

import numpy as np
import pandas as pd

from .case_series import date_span
from .contact_graph import ContactGraph
from .errors import DomainError, NoCases, NoInfectors, UnknownRegion
from .record_parser import PatientRecord, region_of

logger = logging.getLogger(__name__)

DEFAULT_K_MAX = 20
NATIONAL = "national"
METRICS = ("r0", "cfr")


@dataclass(frozen=True)
class ContactHistogram:
    """
    buckets[k - 1] is the number of infectors who each infected exactly k
    persons, for k = 1..k_max. Out-degrees above k_max land in the last
    bucket.
    """
    region: Optional[str]
    buckets: tuple
    clamped: int = 0

    @classmethod
    def from_counts(cls, region: Optional[str], counts: Sequence[int]) -> "ContactHistogram":
        counts = tuple(int(c) for c in counts)
        if not counts:
            raise DomainError("A contact histogram needs at least one bucket")
        if any(c < 0 for c in counts):
            raise DomainError(f"Bucket counts must be non-negative, got: {list(counts)}")
        return cls(region=region, buckets=counts)

    @property
    def k_max(self) -> int:
        return len(self.buckets)

    def bucket(self, k: int) -> int:
        return self.buckets[k - 1]

    @property
    def infectors(self) -> int:
        return sum(self.buckets)

    @property
    def infected(self) -> int:
        return sum(k * count for k, count in enumerate(self.buckets, 1))


@dataclass(frozen=True)
class R0Value:
    value: float
    numerator: int
    denominator: int

    def as_dict(self) -> Dict:
        return {"value": self.value, "infected": self.numerator, "infectors": self.denominator}


@dataclass(frozen=True)
class FatalityRate:
    percent: float
    deaths: int
    infected: int

    def as_dict(self) -> Dict:
        return {"percent": self.percent, "deaths": self.deaths, "infected": self.infected}


def _announced(graph: ContactGraph, number: int) -> date:
    return graph.records[number].date_announced


def _edge_date(graph: ContactGraph, infector: int, infectee: int) -> date:
    """An edge is known once both ends have been announced."""
    return max(_announced(graph, infector), _announced(graph, infectee))


def _check_region(graph: ContactGraph, region: Optional[str]):
    if region is not None and region not in graph.regions:
        raise UnknownRegion(region, known=graph.regions)


def contact_histogram(graph: ContactGraph, region: Optional[str] = None,
                      k_max: int = DEFAULT_K_MAX, as_of: Optional[date] = None) -> ContactHistogram:
    """
    Out-degree histogram of the infectors in a region.

    Args:
        graph: Contact graph
        region: Region id of the infector; None for the whole graph
        k_max: Number of buckets
        as_of: Only count edges known on this date

    Returns:
        ContactHistogram; nodes without onward transmission are excluded

    Raises:
        UnknownRegion: If no node belongs to the region
    """
    if k_max < 1:
        raise DomainError(f"k_max must be at least 1, got: {k_max}")
    _check_region(graph, region)
    buckets = [0] * k_max
    clamped = 0
    for node in graph.nodes(region):
        infectees = graph.infectees_of(node)
        if as_of is not None:
            infectees = [b for b in infectees if _edge_date(graph, node, b) <= as_of]
        degree = len(infectees)
        if degree == 0:
            continue
        if degree > k_max:
            logger.warning("P%d infected %d persons; counted in bucket %d", node, degree, k_max)
            clamped += 1
            degree = k_max
        buckets[degree - 1] += 1
    return ContactHistogram(region=region, buckets=tuple(buckets), clamped=clamped)


def average_r0(hist: ContactHistogram) -> R0Value:
    """
    Mean out-degree over infectors: sum(k * bucket[k]) / sum(bucket[k]).

    Raises:
        NoInfectors: If every bucket is empty
    """
    if hist.infectors == 0:
        where = f" in {hist.region}" if hist.region else ""
        raise NoInfectors(f"No traced onward transmission{where}: R0 is undefined")
    return R0Value(value=hist.infected / hist.infectors,
                   numerator=hist.infected, denominator=hist.infectors)


def pooled_r0(graph: ContactGraph, region: Optional[str] = None,
              as_of: Optional[date] = None) -> R0Value:
    """
    Edges over infectors, pooled across the graph or one region.

    Raises:
        UnknownRegion: If no node belongs to the region
        NoInfectors: If there are no traced edges
    """
    _check_region(graph, region)
    edges = 0
    infectors = 0
    for node in graph.nodes(region):
        degree = sum(1 for b in graph.infectees_of(node)
                     if as_of is None or _edge_date(graph, node, b) <= as_of)
        edges += degree
        infectors += degree > 0
    if infectors == 0:
        raise NoInfectors("No traced onward transmission: R0 is undefined")
    return R0Value(value=edges / infectors, numerator=edges, denominator=infectors)


def case_fatality_rate(records: Iterable[PatientRecord], region: Optional[str] = None,
                       as_of: Optional[date] = None) -> FatalityRate:
    """
    Deaths as a percentage of confirmed cases.

    Args:
        records: Parsed records
        region: Region id; None for all records
        as_of: Count cases announced and deaths recorded on or before this date

    Returns:
        FatalityRate

    Raises:
        NoCases: If no case is in scope
    """
    infected = 0
    deaths = 0
    for record in records:
        if region is not None and region_of(record) != region:
            continue
        if as_of is not None and record.date_announced > as_of:
            continue
        infected += 1
        if record.is_deceased and (as_of is None or record.outcome_date <= as_of):
            deaths += 1
    if infected == 0:
        where = f" in {region}" if region else ""
        raise NoCases(f"No confirmed cases{where}: case fatality rate is undefined")
    return FatalityRate(percent=100.0 * deaths / infected, deaths=deaths, infected=infected)


def _cumulative_by_region(day_of: Sequence[date], region_of_row: Sequence[str],
                          days: List[date], regions: List[str]) -> pd.DataFrame:
    if not day_of:
        return pd.DataFrame(0, index=days, columns=regions)
    counts = pd.crosstab(pd.Series(list(day_of), name="date"),
                         pd.Series(list(region_of_row), name="region"))
    return counts.reindex(index=days, columns=regions, fill_value=0).cumsum()


def _ratio(numerator: pd.DataFrame, denominator: pd.DataFrame, scale: float) -> pd.DataFrame:
    return scale * numerator / denominator.where(denominator > 0)


def daily_extremes(records: Sequence[PatientRecord], graph: ContactGraph,
                   metric: str = "r0") -> pd.DataFrame:
    """
    Per-day minimum and maximum of a metric across regions, plus the
    pooled national value.

    Args:
        records: Parsed records
        graph: Contact graph over the same records
        metric: 'r0' (edges / infectors, regions by infector) or 'cfr' (percent)

    Returns:
        DataFrame indexed by date with min_region_value, max_region_value,
        national_value, min_region and max_region. Days binned by
        announcement date; regions where the metric is undefined that day
        are left out, and days with no defined region hold NaN.
    """
    if metric not in METRICS:
        raise DomainError(f"Unsupported metric: {metric}. Supported metrics: {list(METRICS)}")
    columns = ["min_region_value", "max_region_value", "national_value", "min_region", "max_region"]
    if not records:
        return pd.DataFrame(columns=columns)

    regions = sorted({region_of(r) for r in records})
    first = min(r.date_announced for r in records)
    last = max(max(r.date_announced, r.outcome_date) for r in records)
    days = date_span(first, last)

    if metric == "cfr":
        numerator = _cumulative_by_region([r.outcome_date for r in records if r.is_deceased],
                                          [region_of(r) for r in records if r.is_deceased],
                                          days, regions)
        denominator = _cumulative_by_region([r.date_announced for r in records],
                                            [region_of(r) for r in records], days, regions)
        scale = 100.0
    else:
        edge_days, edge_regions, first_edge = [], [], {}
        for infector, infectee in graph.graph.edges():
            known = _edge_date(graph, infector, infectee)
            edge_days.append(known)
            edge_regions.append(graph.region(infector))
            first_edge[infector] = min(known, first_edge.get(infector, known))
        numerator = _cumulative_by_region(edge_days, edge_regions, days, regions)
        denominator = _cumulative_by_region(list(first_edge.values()),
                                            [graph.region(n) for n in first_edge], days, regions)
        scale = 1.0

    by_region = _ratio(numerator, denominator, scale)
    national = _ratio(numerator.sum(axis=1).to_frame(), denominator.sum(axis=1).to_frame(), scale)

    rows = []
    for day in days:
        defined = by_region.loc[day].dropna()
        if defined.empty:
            row = [np.nan, np.nan, None, None]
        else:
            row = [float(defined.min()), float(defined.max()),
                   str(defined.idxmin()), str(defined.idxmax())]
        rows.append({"min_region_value": row[0], "max_region_value": row[1],
                     "national_value": float(national.loc[day].iloc[0]),
                     "min_region": row[2], "max_region": row[3]})
    return pd.DataFrame(rows, index=pd.Index(days, name="date"), columns=columns)


def table2_rows(graph: ContactGraph, regions: Optional[Iterable[str]] = None,
                k_max: int = DEFAULT_K_MAX, as_of: Optional[date] = None) -> List[Dict]:
    """
    Contact histogram rows per region plus a national row.

    Region averages come from the histogram. The national average pools
    every edge over every infector, so degrees above k_max still count
    in full there. Undefined averages are left empty.
    """
    rows = []
    selected = sorted(regions) if regions is not None else sorted(graph.regions)
    for region in selected + [None]:
        hist = contact_histogram(graph, region, k_max=k_max, as_of=as_of)
        row = {"region": region or NATIONAL}
        row.update({str(k): count for k, count in enumerate(hist.buckets, 1)})
        row["infectors"] = hist.infectors
        row["infected"] = hist.infected
        row["clamped"] = hist.clamped
        try:
            if region is None:
                pooled = pooled_r0(graph, as_of=as_of)
                row["infected"] = pooled.numerator
                row["avg_r0"] = pooled.value
            else:
                row["avg_r0"] = average_r0(hist).value
        except NoInfectors:
            row["avg_r0"] = None
        rows.append(row)
    return rows


def table3_rows(records: Sequence[PatientRecord], regions: Optional[Iterable[str]] = None,
                as_of: Optional[date] = None) -> List[Dict]:
    """Case fatality rate per region plus the national figure."""
    rows = []
    selected = sorted(regions) if regions is not None else sorted({region_of(r) for r in records})
    for region in selected + [None]:
        row = {"region": region or NATIONAL}
        try:
            rate = case_fatality_rate(records, region, as_of=as_of)
            row.update({"cases": rate.infected, "deaths": rate.deaths, "cfr_percent": rate.percent})
        except NoCases:
            row.update({"cases": 0, "deaths": 0, "cfr_percent": None})
        rows.append(row)
    return rows


def reference_check(value: Optional[float], reference: float, tolerance: float) -> Dict:
    """
    Compare a computed national figure with its published value.

    Args:
        value: Computed value; None when undefined
        reference: Published value
        tolerance: Allowed relative deviation, e.g. 0.15

    Returns:
        Dictionary with value, reference, relative_deviation and
        within_tolerance (None when the value is undefined)
    """
    if value is None or reference == 0:
        deviation = None
    else:
        deviation = (value - reference) / reference
    return {
        "value": value,
        "reference": reference,
        "tolerance": tolerance,
        "relative_deviation": deviation,
        "within_tolerance": None if deviation is None else abs(deviation) <= tolerance,
    }
