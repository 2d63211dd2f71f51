#!/usr/bin/env python3
"""
Patient record parsing utilities
Parses the case-record CSV, normalizes fields and reports line-numbered
warnings for everything it had to drop or guess.
"""

import io
import json
import logging
import re
import sys
from dataclasses import asdict, dataclass, field
from datetime import date
from enum import Enum
from typing import Dict, Iterable, List, Optional, Tuple

import pandas as pd

from .errors import EmptyInput, InputError, MissingHeader, UnknownRegion

logger = logging.getLogger(__name__)

DATE_FORMAT = "%d/%m/%Y"
ISO_DATE_FORMAT = "%Y-%m-%d"
UNKNOWN_REGION = "unknown"

# Canonical column order, as published.
COLUMNS = [
    ("patient_number", "Patient Number"),
    ("state_patient_number", "State Patient Number"),
    ("date_announced", "Date Announced"),
    ("age_bracket", "Age Bracket"),
    ("gender", "Gender"),
    ("detected_city", "Detected City"),
    ("detected_district", "Detected District"),
    ("detected_state", "Detected State"),
    ("state_code", "State code"),
    ("current_status", "Current Status"),
    ("notes", "Notes"),
    ("contracted_from", "Contracted from which Patient (Suspected)"),
    ("nationality", "Nationality"),
    ("transmission_type", "Type of transmission"),
    ("status_change_date", "Status Change Date"),
]

HEADER_ALIASES = {
    "patientnumber": "patient_number",
    "statepatientnumber": "state_patient_number",
    "dateannounced": "date_announced",
    "dateannouncement": "date_announced",
    "agebracket": "age_bracket",
    "age": "age_bracket",
    "gender": "gender",
    "detectedcity": "detected_city",
    "detecteddistrict": "detected_district",
    "detectedstate": "detected_state",
    "statecode": "state_code",
    "currentstatus": "current_status",
    "notes": "notes",
    "contractedfromwhichpatientsuspected": "contracted_from",
    "contractedfromwhichpatient": "contracted_from",
    "contactedfromwhichpatient": "contracted_from",
    "contractedfrom": "contracted_from",
    "nationality": "nationality",
    "typeoftransmission": "transmission_type",
    "transmissiontype": "transmission_type",
    "statuschangedate": "status_change_date",
}

REQUIRED_FIELDS = ("patient_number", "date_announced")

_PATIENT_TOKEN = re.compile(r"^P(\d+)$", re.IGNORECASE)
_TOKEN_SPLIT = re.compile(r"[,;\s]+")


class Gender(Enum):
    FEMALE = "F"
    MALE = "M"
    UNKNOWN = "unknown"


class CaseStatus(Enum):
    RECOVERED = "Recovered"
    HOSPITALIZED = "Hospitalized"
    DECEASED = "Deceased"
    UNKNOWN = "unknown"


class TransmissionType(Enum):
    IMPORTED = "Imported"
    LOCAL = "Local"
    UNKNOWN = "TBD"


_GENDERS = {"f": Gender.FEMALE, "female": Gender.FEMALE, "m": Gender.MALE, "male": Gender.MALE}
_STATUSES = {
    "recovered": CaseStatus.RECOVERED,
    "hospitalized": CaseStatus.HOSPITALIZED,
    "hospitalised": CaseStatus.HOSPITALIZED,
    "deceased": CaseStatus.DECEASED,
    "dead": CaseStatus.DECEASED,
}
_TRANSMISSIONS = {
    "imported": TransmissionType.IMPORTED,
    "local": TransmissionType.LOCAL,
    "tbd": TransmissionType.UNKNOWN,
    "unknown": TransmissionType.UNKNOWN,
}


@dataclass(frozen=True)
class ParseWarning:
    line: int
    field: str
    message: str

    def as_dict(self) -> Dict:
        return asdict(self)


@dataclass(frozen=True)
class PatientRecord:
    patient_number: int
    date_announced: date
    state_patient_number: Optional[str] = None
    age_bracket: Optional[int] = None
    gender: Gender = Gender.UNKNOWN
    detected_city: Optional[str] = None
    detected_district: Optional[str] = None
    detected_state: Optional[str] = None
    state_code: Optional[str] = None
    current_status: CaseStatus = CaseStatus.UNKNOWN
    notes: Optional[str] = None
    contracted_from: Tuple[int, ...] = ()
    nationality: Optional[str] = None
    transmission_type: TransmissionType = TransmissionType.UNKNOWN
    status_change_date: Optional[date] = None
    line: int = field(default=0, compare=False)

    @property
    def region(self) -> str:
        return region_of(self)

    @property
    def effective_status(self) -> CaseStatus:
        """Status used by the metrics: blanks count as active cases."""
        if self.current_status is CaseStatus.UNKNOWN:
            return CaseStatus.HOSPITALIZED
        return self.current_status

    @property
    def is_deceased(self) -> bool:
        return self.current_status is CaseStatus.DECEASED

    @property
    def outcome_date(self) -> date:
        """Date a death or recovery is attributed to."""
        return self.status_change_date or self.date_announced


def region_of(record: PatientRecord) -> str:
    """
    Region identity of a record.

    Returns:
        state_code when present, else detected_state, else "unknown"
    """
    if record.state_code:
        return record.state_code.upper()
    if record.detected_state:
        return record.detected_state
    return UNKNOWN_REGION


def region_aliases(records: Iterable[PatientRecord]) -> Dict[str, str]:
    """Map lower-cased region codes and state names to region ids."""
    aliases = {}
    for record in records:
        region = region_of(record)
        aliases.setdefault(region.lower(), region)
        if record.detected_state:
            aliases.setdefault(record.detected_state.strip().lower(), region)
    return aliases


def resolve_region(name: str, aliases: Dict[str, str]) -> str:
    """
    Resolve a user-supplied region (code or state name) to a region id.

    Raises:
        UnknownRegion: If nothing in the dataset matches
    """
    key = name.strip().lower()
    if key not in aliases:
        raise UnknownRegion(name, known=set(aliases.values()))
    return aliases[key]


def _normalize_header(name: str) -> str:
    return re.sub(r"[^a-z0-9]", "", str(name).lower())


def _optional_text(value: str) -> Optional[str]:
    value = value.strip()
    return value or None


class _RowParser:
    """Field converters that collect warnings for one parse run."""

    def __init__(self, date_format: str):
        self.date_format = date_format
        self.warnings: List[ParseWarning] = []

    def warn(self, line: int, field_name: str, message: str):
        warning = ParseWarning(line=line, field=field_name, message=message)
        self.warnings.append(warning)
        logger.warning("line %d: %s: %s", line, field_name, message)

    def parse_date(self, value: str, line: int, field_name: str) -> Optional[date]:
        value = value.strip()
        if not value:
            return None
        parsed = pd.to_datetime(value, format=self.date_format, errors="coerce")
        if pd.isna(parsed):
            self.warn(line, field_name, f"unparseable date '{value}'")
            return None
        return parsed.date()

    def parse_age(self, value: str, line: int) -> Optional[int]:
        value = value.strip()
        if not value:
            return None
        try:
            age = float(value)
        except ValueError:
            age = -1.0
        if age < 0 or age != int(age):
            self.warn(line, "age_bracket", f"invalid age '{value}'")
            return None
        return int(age)

    def parse_enum(self, value: str, line: int, field_name: str, table: Dict, unknown):
        key = value.strip().lower()
        if not key:
            return unknown
        if key not in table:
            self.warn(line, field_name, f"unrecognized value '{value.strip()}'")
            return unknown
        return table[key]

    def parse_contacts(self, value: str, line: int, own_number: int) -> Tuple[int, ...]:
        infectors: List[int] = []
        for token in _TOKEN_SPLIT.split(value.strip()):
            if not token:
                continue
            match = _PATIENT_TOKEN.match(token)
            if not match:
                self.warn(line, "contracted_from", f"ignoring token '{token}'")
                continue
            number = int(match.group(1))
            if number == own_number:
                self.warn(line, "contracted_from", f"dropping self reference P{number}")
                continue
            if number in infectors:
                self.warn(line, "contracted_from", f"duplicate reference P{number}")
                continue
            infectors.append(number)
        return tuple(infectors)


def parse_dataset(raw_text: str, iso_dates: bool = False) -> Tuple[List[PatientRecord], List[ParseWarning]]:
    """
    Parse case-record CSV text.

    Args:
        raw_text: CSV content with a header row; columns matched by
            normalized name in any order
        iso_dates: Read dates as YYYY-MM-DD instead of DD/MM/YYYY

    Returns:
        Tuple of (records, warnings). Records keep input order.

    Raises:
        MissingHeader: No recognizable header row
        EmptyInput: Empty text, or a header with no data rows
    """
    if not raw_text or not raw_text.strip():
        raise EmptyInput("Input is empty: no header and no data rows")
    try:
        frame = pd.read_csv(io.StringIO(raw_text), dtype=str, keep_default_na=False,
                            skip_blank_lines=True)
    except pd.errors.EmptyDataError as e:
        raise MissingHeader(f"Cannot read CSV header: {e}")
    except pd.errors.ParserError as e:
        raise InputError(f"Malformed CSV: {e}")

    mapping = {}
    for column in frame.columns:
        field_name = HEADER_ALIASES.get(_normalize_header(column))
        if field_name and field_name not in mapping.values():
            mapping[column] = field_name
    missing = [name for name in REQUIRED_FIELDS if name not in mapping.values()]
    if missing:
        raise MissingHeader(f"Header row lacks required columns {missing}; "
                            f"found {list(frame.columns)}")
    if frame.empty:
        raise EmptyInput("Header found but the input has no data rows")

    frame = frame[list(mapping)].rename(columns=mapping).fillna("")
    for name, _ in COLUMNS:
        if name not in frame.columns:
            frame[name] = ""

    parser = _RowParser(ISO_DATE_FORMAT if iso_dates else DATE_FORMAT)
    records: List[PatientRecord] = []
    seen = set()
    for index, row in enumerate(frame.to_dict(orient="records")):
        line = index + 2
        raw_number = row["patient_number"].strip()
        if not raw_number.isdigit() or int(raw_number) < 1:
            parser.warn(line, "patient_number", f"dropping row: invalid patient number '{raw_number}'")
            continue
        number = int(raw_number)
        if number in seen:
            parser.warn(line, "patient_number", f"dropping row: duplicate patient number {number}")
            continue
        announced = parser.parse_date(row["date_announced"], line, "date_announced")
        if announced is None:
            parser.warn(line, "date_announced", "dropping row: date announced missing")
            continue
        seen.add(number)

        changed = parser.parse_date(row["status_change_date"], line, "status_change_date")
        if changed is not None and changed < announced:
            parser.warn(line, "status_change_date",
                        f"status change {changed.isoformat()} precedes announcement "
                        f"{announced.isoformat()}")
            changed = None

        state_code = _optional_text(row["state_code"])
        records.append(PatientRecord(
            patient_number=number,
            date_announced=announced,
            state_patient_number=_optional_text(row["state_patient_number"]),
            age_bracket=parser.parse_age(row["age_bracket"], line),
            gender=parser.parse_enum(row["gender"], line, "gender", _GENDERS, Gender.UNKNOWN),
            detected_city=_optional_text(row["detected_city"]),
            detected_district=_optional_text(row["detected_district"]),
            detected_state=_optional_text(row["detected_state"]),
            state_code=state_code.upper() if state_code else None,
            current_status=parser.parse_enum(row["current_status"], line, "current_status",
                                             _STATUSES, CaseStatus.UNKNOWN),
            notes=_optional_text(row["notes"]),
            contracted_from=parser.parse_contacts(row["contracted_from"], line, number),
            nationality=_optional_text(row["nationality"]),
            transmission_type=parser.parse_enum(row["transmission_type"], line, "transmission_type",
                                                _TRANSMISSIONS, TransmissionType.UNKNOWN),
            status_change_date=changed,
            line=line,
        ))

    logger.info("Parsed %d record(s) with %d warning(s)", len(records), len(parser.warnings))
    return records, parser.warnings


def serialize_records(records: Iterable[PatientRecord], iso_dates: bool = False) -> str:
    """
    Write records back to CSV with the published column headers.

    Unknown transmission types are written as 'TBD'; other unknowns as
    blank cells.
    """
    date_format = ISO_DATE_FORMAT if iso_dates else DATE_FORMAT

    def cell(value) -> str:
        if value is None:
            return ""
        if isinstance(value, date):
            return value.strftime(date_format)
        if isinstance(value, (Gender, CaseStatus)):
            return "" if value.value == "unknown" else value.value
        if isinstance(value, TransmissionType):
            return value.value
        if isinstance(value, tuple):
            return ", ".join(f"P{n}" for n in value)
        return str(value)

    rows = [{header: cell(getattr(record, name)) for name, header in COLUMNS} for record in records]
    frame = pd.DataFrame(rows, columns=[header for _, header in COLUMNS])
    return frame.to_csv(index=False, lineterminator="\n")


def read_text_input(path: Optional[str]) -> str:
    """
    Read CSV text from a file, or standard input when path is None or '-'.

    Raises:
        InputError: If the file cannot be read
    """
    if path is None or path == "-":
        return sys.stdin.read()
    try:
        with open(path, 'r', encoding='utf-8-sig') as f:
            return f.read()
    except (OSError, UnicodeDecodeError) as e:
        raise InputError(f"Cannot read input {path}: {e}")


def warnings_to_jsonl(warnings: Iterable[ParseWarning]) -> str:
    """One JSON object per line: {"field", "line", "message"}."""
    return "".join(json.dumps(w.as_dict(), sort_keys=True) + "\n" for w in warnings)
