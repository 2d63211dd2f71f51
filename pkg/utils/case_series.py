#!/usr/bin/env python3
"""
Daily case series
Per-day new cases, cumulative cases, deaths and recoveries.
"""

from datetime import date
from typing import Iterable, List, Optional

import pandas as pd

from .record_parser import CaseStatus, PatientRecord, region_of

SERIES_COLUMNS = ["new_cases", "cumulative_cases", "deaths", "recoveries"]


def date_span(start: date, end: date) -> List[date]:
    """Every calendar day from start to end inclusive."""
    return list(pd.date_range(start, end, freq="D").date)


def daily_counts(records: Iterable[PatientRecord], region: Optional[str] = None) -> pd.DataFrame:
    """
    Dense daily series for one region or for everything.

    Args:
        records: Parsed records
        region: Region id to keep; None keeps all records

    Returns:
        DataFrame indexed by datetime.date from the first to the last
        relevant day, gaps filled with zeros. Cases are dated by
        announcement; deaths and recoveries by status change date,
        falling back to the announcement date.
    """
    selected = [r for r in records if region is None or region_of(r) == region]
    if not selected:
        empty = pd.DataFrame(columns=SERIES_COLUMNS, dtype=int)
        empty.index.name = "date"
        return empty

    frame = pd.DataFrame({
        "announced": [r.date_announced for r in selected],
        "outcome": [r.outcome_date for r in selected],
        "status": [r.current_status.value for r in selected],
    })
    days = date_span(min(frame["announced"].min(), frame["outcome"].min()),
                     max(frame["announced"].max(), frame["outcome"].max()))

    def per_day(mask, column: str) -> pd.Series:
        return frame[mask].groupby(column).size().reindex(days, fill_value=0)

    everyone = pd.Series(True, index=frame.index)
    series = pd.DataFrame(index=pd.Index(days, name="date"))
    series["new_cases"] = per_day(everyone, "announced").to_numpy()
    series["cumulative_cases"] = series["new_cases"].cumsum()
    series["deaths"] = per_day(frame["status"] == CaseStatus.DECEASED.value, "outcome").to_numpy()
    series["recoveries"] = per_day(frame["status"] == CaseStatus.RECOVERED.value, "outcome").to_numpy()
    return series.astype(int)
