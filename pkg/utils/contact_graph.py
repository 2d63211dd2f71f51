#!/usr/bin/env python3
"""
Contact graph utilities
Builds the directed infector -> infectee graph from the contracted-from
column and answers degree and chain questions about it.
"""

import logging
from typing import Any, Callable, Dict, Iterable, List, Optional, Set

import networkx as nx

from .errors import CycleDetected, InputError
from .record_parser import ParseWarning, PatientRecord, region_of

logger = logging.getLogger(__name__)


class ContactGraph:
    """
    Directed acyclic graph over patient numbers.

    Every node carries its region; an edge (a, b) means b lists a in its
    contracted-from cell.
    """

    def __init__(self, graph: nx.DiGraph, records: Dict[int, PatientRecord],
                 warnings: Optional[List[ParseWarning]] = None, dangling: int = 0):
        self.graph = graph
        self.records = records
        self.warnings = list(warnings or [])
        self.dangling = dangling
        self._cache: Dict[str, Any] = {}

    def __len__(self) -> int:
        return self.graph.number_of_nodes()

    def __contains__(self, patient_number: int) -> bool:
        return patient_number in self.graph

    @property
    def edges(self) -> Set[tuple]:
        return set(self.graph.edges())

    @property
    def edge_count(self) -> int:
        return self.graph.number_of_edges()

    @property
    def regions(self) -> Set[str]:
        return {region for _, region in self.graph.nodes(data="region")}

    def region(self, patient_number: int) -> str:
        return self.graph.nodes[patient_number]["region"]

    def out_degree(self, patient_number: int) -> int:
        return self.graph.out_degree(patient_number)

    def infectors_of(self, patient_number: int) -> List[int]:
        """Resolved infectors, in ascending patient number."""
        return sorted(self.graph.predecessors(patient_number))

    def infectees_of(self, patient_number: int) -> List[int]:
        return sorted(self.graph.successors(patient_number))

    def nodes(self, region: Optional[str] = None) -> List[int]:
        if region is None:
            return sorted(self.graph.nodes())
        return sorted(n for n, r in self.graph.nodes(data="region") if r == region)

    def infectors(self, region: Optional[str] = None) -> List[int]:
        """Nodes with at least one traced onward transmission."""
        return [n for n in self.nodes(region) if self.graph.out_degree(n) >= 1]

    def topological_order(self) -> List[int]:
        """Infectors before infectees; ties broken by patient number."""
        return list(nx.lexicographical_topological_sort(self.graph))

    def memo(self, key: str, compute: Callable[["ContactGraph"], Any]) -> Any:
        """Compute a derived quantity once per graph."""
        if key not in self._cache:
            self._cache[key] = compute(self)
        return self._cache[key]


def build_contact_graph(records: Iterable[PatientRecord]) -> ContactGraph:
    """
    Build the contact graph for parsed records.

    Args:
        records: Parsed records with unique patient numbers

    Returns:
        ContactGraph; dangling references are reported in its warnings
        list and produce no edge. References to a later patient number
        are kept as edges and also reported

    Raises:
        InputError: If patient numbers repeat
        CycleDetected: If an infection chain loops back on itself
    """
    by_number: Dict[int, PatientRecord] = {}
    graph = nx.DiGraph()
    for record in records:
        if record.patient_number in by_number:
            raise InputError(f"Duplicate patient number: {record.patient_number}")
        by_number[record.patient_number] = record
        graph.add_node(record.patient_number, region=region_of(record))

    warnings: List[ParseWarning] = []
    dangling = 0

    def warn(record: PatientRecord, message: str) -> None:
        warning = ParseWarning(line=record.line, field="contracted_from", message=message)
        warnings.append(warning)
        logger.warning("line %d: %s", warning.line, warning.message)

    for number, record in by_number.items():
        for infector in record.contracted_from:
            if infector not in by_number:
                warn(record, f"P{number} references unknown patient P{infector}")
                dangling += 1
                continue
            if infector > number:
                warn(record, f"P{number} references later patient P{infector}")
            graph.add_edge(infector, number)

    try:
        cycle = nx.find_cycle(graph)
    except nx.NetworkXNoCycle:
        cycle = None
    if cycle:
        chain = [u for u, _ in cycle] + [cycle[0][0]]
        raise CycleDetected(chain)

    logger.debug("Contact graph: %d nodes, %d edges", graph.number_of_nodes(), graph.number_of_edges())
    return ContactGraph(graph, by_number, warnings, dangling=dangling)


def graph_stats(graph: ContactGraph) -> Dict[str, int]:
    """
    Summary numbers for the ingest validation report.

    Returns:
        Dictionary with node, edge and infector counts, the largest
        out-degree, the longest chain (in edges), the number of weakly
        connected components, the number of regions and the number of
        dangling references
    """
    g = graph.graph
    empty = g.number_of_nodes() == 0
    return {
        "nodes": g.number_of_nodes(),
        "edges": g.number_of_edges(),
        "infectors": len(graph.infectors()),
        "max_out_degree": 0 if empty else max(d for _, d in g.out_degree()),
        "longest_chain": 0 if empty else nx.dag_longest_path_length(g),
        "components": 0 if empty else nx.number_weakly_connected_components(g),
        "regions": len(graph.regions),
        "dangling_references": graph.dangling,
    }
