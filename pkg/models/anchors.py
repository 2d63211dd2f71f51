#!/usr/bin/env python3
"""
Reference anchors
Loads the published reference values shipped in configs/reference_anchors.json.
"""

import json
import os
from functools import lru_cache
from typing import Any, Dict

from utils.errors import InputError

ANCHORS_PATH = os.path.join(os.path.dirname(__file__), 'configs', 'reference_anchors.json')


@lru_cache(maxsize=1)
def _load(path: str) -> Dict[str, Any]:
    try:
        with open(path, 'r', encoding='utf-8') as f:
            return json.load(f)
    except (FileNotFoundError, json.JSONDecodeError) as e:
        raise InputError(f"Failed to load reference anchors: {e}")


def load_reference_anchors(section: str = None) -> Dict[str, Any]:
    """Return all anchors, or one section of them."""
    anchors = _load(ANCHORS_PATH)
    if section is None:
        return dict(anchors)
    if section not in anchors:
        raise InputError(f"Unknown anchor section: {section}. "
                         f"Available: {[k for k in anchors if k != 'description']}")
    return dict(anchors[section])
