"""Test suite for qboson."""
