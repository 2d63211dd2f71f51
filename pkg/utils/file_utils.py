#!/usr/bin/env python3
"""
File utility functions
Handles output files: CSV tables with a metadata comment header, JSON
documents with a metadata object, and plain text.
"""

import json
import logging
import math
import os
from datetime import date, datetime
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

logger = logging.getLogger(__name__)


def _jsonable(value: Any) -> Any:
    """Convert numpy scalars, dates and NaN into plain JSON values."""
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        items = sorted(value) if isinstance(value, (set, frozenset)) else value
        return [_jsonable(v) for v in items]
    if isinstance(value, np.ndarray):
        return [_jsonable(v) for v in value.tolist()]
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, (date, datetime)):
        return value.isoformat()
    if isinstance(value, float) and (math.isnan(value) or math.isinf(value)):
        return None
    return value


def format_metadata(command: str, parameters: Dict, include_timestamp: bool = True,
                    **extra) -> Dict:
    """
    Build the metadata block embedded in every output file.

    Args:
        command: Subcommand that produced the file
        parameters: Full effective parameter set
        include_timestamp: Add generated_at (off for reproducible output)
        **extra: Additional entries, e.g. model or sweep description

    Returns:
        Metadata dictionary
    """
    metadata = {"command": command, "parameters": _jsonable(parameters)}
    metadata.update({k: _jsonable(v) for k, v in extra.items()})
    if include_timestamp:
        metadata["generated_at"] = datetime.now().isoformat(timespec="seconds")
    return metadata


def save_json_output(output_data: Dict, output_path: str) -> bool:
    """
    Save output data to JSON file.

    Args:
        output_data: Dictionary to save
        output_path: Path where to save the JSON file

    Returns:
        True if successful, False otherwise
    """
    try:
        with open(output_path, 'w', encoding='utf-8') as f:
            json.dump(_jsonable(output_data), f, indent=2, ensure_ascii=False, sort_keys=True)
            f.write("\n")
        logger.info("Output saved to: %s", output_path)
        return True
    except (OSError, TypeError, ValueError) as e:
        logger.error("Error saving output to %s: %s", output_path, e)
        return False


def save_csv_table(rows: Sequence[Dict], output_path: str, metadata: Optional[Dict] = None,
                   columns: Optional[List[str]] = None) -> bool:
    """
    Save rows as CSV, preceded by '# key: value' metadata lines.

    Args:
        rows: One dictionary per row
        output_path: Destination file
        metadata: Written as comment lines, one per key, sorted
        columns: Column order; defaults to the keys of the first row

    Returns:
        True if successful, False otherwise
    """
    if columns is None:
        columns = list(rows[0].keys()) if rows else []
    frame = pd.DataFrame([_jsonable(dict(r)) for r in rows], columns=columns)
    return save_frame(frame, output_path, metadata, index=False)


def save_frame(frame: pd.DataFrame, output_path: str, metadata: Optional[Dict] = None,
               index: bool = True) -> bool:
    """Write a DataFrame as CSV with the metadata comment header."""
    try:
        with open(output_path, 'w', encoding='utf-8', newline='') as f:
            for key, value in sorted((metadata or {}).items()):
                f.write(f"# {key}: {json.dumps(_jsonable(value), sort_keys=True)}\n")
            frame.to_csv(f, index=index, lineterminator="\n", na_rep="")
        logger.info("Output saved to: %s", output_path)
        return True
    except OSError as e:
        logger.error("Error saving output to %s: %s", output_path, e)
        return False


def save_series(frame: pd.DataFrame, output_path: str, fmt: str = "csv",
                metadata: Optional[Dict] = None) -> bool:
    """
    Save an indexed series (dates or times) as CSV or JSON.

    JSON output holds {"metadata": ..., "rows": [...]} with the index as
    the first field of every row.
    """
    if fmt == "json":
        rows = frame.reset_index().to_dict(orient="records")
        return save_json_output({"metadata": metadata or {}, "rows": rows}, output_path)
    return save_frame(frame, output_path, metadata, index=True)


def save_table(rows: Sequence[Dict], output_path: str, fmt: str = "csv",
               metadata: Optional[Dict] = None, columns: Optional[List[str]] = None) -> bool:
    """Save table rows as CSV or as JSON {"metadata", "rows"}."""
    if fmt == "json":
        return save_json_output({"metadata": metadata or {}, "rows": list(rows)}, output_path)
    return save_csv_table(rows, output_path, metadata, columns)


def save_text(text: str, output_path: str) -> bool:
    try:
        with open(output_path, 'w', encoding='utf-8', newline='') as f:
            f.write(text)
        logger.info("Output saved to: %s", output_path)
        return True
    except OSError as e:
        logger.error("Error saving output to %s: %s", output_path, e)
        return False


def output_path(output_dir: str, name: str, fmt: str) -> str:
    return os.path.join(output_dir, f"{name}.{fmt}")


def ensure_output_directory(output_dir: str) -> None:
    """
    Ensure the output directory exists.

    Args:
        output_dir: Output directory path
    """
    os.makedirs(output_dir, exist_ok=True)
