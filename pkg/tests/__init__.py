#!/usr/bin/env python3
"""
Tests Package
Contains all test files for the epidemic toolkit.
"""
