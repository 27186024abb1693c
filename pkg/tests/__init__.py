"""Test suite for the sumcentral package."""
