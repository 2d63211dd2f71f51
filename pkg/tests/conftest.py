#!/usr/bin/env python3
"""
Shared fixtures for the test suite.
"""

import os
import sys
from datetime import date, timedelta

import pytest

sys.path.insert(0, os.path.join(os.path.dirname(os.path.abspath(__file__)), '..'))

from utils.contact_graph import build_contact_graph
from utils.record_parser import CaseStatus, PatientRecord, TransmissionType

DATA_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), '..', 'data')
SAMPLE_CSV = os.path.join(DATA_DIR, 'covid19_india_sample.csv')
HISTOGRAMS_JSON = os.path.join(DATA_DIR, 'table2_contact_histograms.json')

HEADER = ("Patient Number,State Patient Number,Date Announced,Age Bracket,Gender,"
          "Detected City,Detected District,Detected State,State code,Current Status,Notes,"
          "Contracted from which Patient (Suspected),Nationality,Type of transmission,"
          "Status Change Date")

BASE_DAY = date(2020, 3, 1)


def make_record(number, day=0, region="KA", infectors=(), transmission=TransmissionType.IMPORTED,
                status=CaseStatus.HOSPITALIZED, changed=None):
    """Build a record announced `day` days after 1 March 2020."""
    return PatientRecord(
        patient_number=number,
        date_announced=BASE_DAY + timedelta(days=day),
        state_code=region,
        current_status=status,
        contracted_from=tuple(infectors),
        transmission_type=transmission,
        status_change_date=None if changed is None else BASE_DAY + timedelta(days=changed),
    )


def csv_text(*rows):
    return "\n".join((HEADER,) + rows) + "\n"


@pytest.fixture
def sample_text():
    with open(SAMPLE_CSV, 'r', encoding='utf-8') as f:
        return f.read()


@pytest.fixture
def chain_records():
    """A and B imported; A -> C -> E and B -> D -> F, as P1..P6."""
    return [
        make_record(1, 0),
        make_record(2, 0),
        make_record(3, 1, infectors=[1], transmission=TransmissionType.LOCAL),
        make_record(4, 1, infectors=[2], transmission=TransmissionType.LOCAL),
        make_record(5, 2, infectors=[3], transmission=TransmissionType.LOCAL),
        make_record(6, 2, infectors=[4], transmission=TransmissionType.LOCAL),
    ]


@pytest.fixture
def chain_graph(chain_records):
    return build_contact_graph(chain_records)


def degree_fixture(region, degrees, start=1):
    """One infector per entry of `degrees`, each with that many infectees."""
    records = []
    number = start
    for degree in degrees:
        infector = number
        records.append(make_record(infector, 0, region))
        number += 1
        for _ in range(degree):
            records.append(make_record(number, 1, region, infectors=[infector],
                                       transmission=TransmissionType.LOCAL))
            number += 1
    return records
